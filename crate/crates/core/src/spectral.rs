//! Perron–Frobenius eigendata of primitive non-negative matrices.
//!
//! Power iteration runs on the matrix and on its transpose simultaneously.
//! After convergence the left vector is scaled to sum to one and the right
//! vector is then scaled so that `uᵀv = 1`. The normalisation order is fixed
//! so results are reproducible bit-for-bit.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::sft::is_primitive_pattern;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITERATIONS: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralData {
    pub lambda: f64,
    /// Left eigenvector, `Σ u = 1`.
    pub u: Vec<f64>,
    /// Right eigenvector, `uᵀ v = 1`.
    pub v: Vec<f64>,
    /// `max(‖Av − λv‖∞, ‖uᵀA − λuᵀ‖∞)`
    pub residual: f64,
    pub tol: f64,
    pub iterations: usize,
}

pub fn dominant_eigendata(matrix: &SquareMatrix, tol: f64) -> Result<SpectralData> {
    dominant_eigendata_with(matrix, tol, DEFAULT_MAX_ITERATIONS)
}

pub fn dominant_eigendata_with(
    matrix: &SquareMatrix,
    tol: f64,
    max_iterations: usize,
) -> Result<SpectralData> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    if !matrix.is_nonnegative() {
        return Err(Error::InvalidParameter("matrix must be finite and non-negative".into()));
    }
    let d = matrix.dim();
    if !is_primitive_pattern(d, &matrix.support()) {
        return Err(Error::NotPrimitive);
    }

    // Small components need their own relative criterion: cylinder masses are
    // products of eigenvector ratios.
    let relative_tol = tol.max(64.0 * f64::EPSILON);
    let mut v = vec![1.0 / d as f64; d];
    let mut u = v.clone();
    let mut prev_lambda = f64::NAN;
    for iteration in 1..=max_iterations {
        let av = matrix.mul_vec(&v);
        let ua = matrix.vec_mul(&u);
        let sv: f64 = av.iter().sum();
        let su: f64 = ua.iter().sum();
        v = av.into_iter().map(|x| x / sv).collect();
        u = ua.into_iter().map(|x| x / su).collect();

        let (lambda, u_n, v_n, residual, relative) = normalised(matrix, &u, &v);
        if (lambda - prev_lambda).abs() < tol && residual <= tol && relative <= relative_tol {
            return Ok(SpectralData {
                lambda,
                u: u_n,
                v: v_n,
                residual,
                tol,
                iterations: iteration,
            });
        }
        prev_lambda = lambda;
    }
    Err(Error::MaxIterations(max_iterations))
}

/// `(λ, u, v, absolute residual, componentwise relative residual)`
fn normalised(matrix: &SquareMatrix, u: &[f64], v: &[f64]) -> (f64, Vec<f64>, Vec<f64>, f64, f64) {
    let su: f64 = u.iter().sum();
    let u: Vec<f64> = u.iter().map(|x| x / su).collect();
    let uv: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let v: Vec<f64> = v.iter().map(|x| x / uv).collect();
    let av = matrix.mul_vec(&v);
    let ua = matrix.vec_mul(&u);
    // uᵀ(Av) with uᵀv = 1
    let lambda: f64 = u.iter().zip(&av).map(|(a, b)| a * b).sum();
    let mut absolute = 0.0f64;
    let mut relative = 0.0f64;
    for (a, b) in av.iter().zip(&v).chain(ua.iter().zip(&u)) {
        let r = (a - lambda * b).abs();
        absolute = absolute.max(r);
        relative = relative.max(r / (lambda * b));
    }
    (lambda, u, v, absolute, relative)
}
