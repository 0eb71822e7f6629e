//! Markov measures on a subshift of finite type.
//!
//! Covers the generic Markov measure `μ_P` of a compatible stochastic matrix,
//! the Parry measure (the measure of maximal entropy) and equilibrium states
//! of potentials that depend on the first two symbols. The latter are again
//! Markov measures, obtained from the Perron–Frobenius data of the weighted
//! matrix `D(a, b) = exp(φ(a, b))`.
//!
//! Cylinder masses of long words are accumulated in log space; the cut-over
//! is [`LOG_SPACE_THRESHOLD`] symbols.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::rng::SymbolRng;
use crate::sft::{is_primitive_pattern, Sft, Symbol, Word};
use crate::spectral::{dominant_eigendata, SpectralData};

/// Words longer than this are evaluated in log space.
pub const LOG_SPACE_THRESHOLD: usize = 64;

/// Tolerance on row sums and on stationarity of a Markov measure.
pub const STOCHASTIC_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct MarkovMeasure {
    sft: Sft,
    transition: SquareMatrix,
    stationary: Vec<f64>,
    log_transition: Vec<f64>,
    cumulative_rows: Vec<f64>,
    cumulative_start: Vec<f64>,
}

fn validate_stochastic(sft: &Sft, transition: &SquareMatrix) -> Result<()> {
    let d = sft.d();
    if transition.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: transition.dim(),
        });
    }
    for i in 0..d {
        let row = transition.row(i);
        if let Some(x) = row.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(Error::NotStochastic(format!("entry {x} in row {i}")));
        }
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > STOCHASTIC_TOL {
            return Err(Error::NotStochastic(format!("row {i} sums to {sum}")));
        }
        for (j, &p) in row.iter().enumerate() {
            if p > 0.0 && !sft.edge(i as Symbol, j as Symbol) {
                return Err(Error::NotCompatible(i, j));
            }
        }
    }
    Ok(())
}

fn stationarity_residual(transition: &SquareMatrix, p: &[f64]) -> f64 {
    transition
        .vec_mul(p)
        .iter()
        .zip(p)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

/// The unique probability vector `p` with `pᵀP = pᵀ` for a primitive
/// stochastic matrix.
pub fn stationary_vector(transition: &SquareMatrix) -> Result<Vec<f64>> {
    let d = transition.dim();
    for i in 0..d {
        let row = transition.row(i);
        let sum: f64 = row.iter().sum();
        if row.iter().any(|x| !(0.0..=1.0).contains(x)) || (sum - 1.0).abs() > STOCHASTIC_TOL {
            return Err(Error::NotStochastic(format!("row {i}")));
        }
    }
    if !is_primitive_pattern(d, &transition.support()) {
        return Err(Error::NotPrimitive);
    }
    // (Pᵀ − I) p = 0 with the last equation replaced by Σ p = 1.
    let mut a = vec![0.0; d * d];
    let mut b = vec![0.0; d];
    for i in 0..d {
        for j in 0..d {
            a[i * d + j] = transition.get(j, i) - if i == j { 1.0 } else { 0.0 };
        }
    }
    for j in 0..d {
        a[(d - 1) * d + j] = 1.0;
    }
    b[d - 1] = 1.0;
    let mut p = solve_dense(d, a, b).ok_or(Error::NotPrimitive)?;
    let sum: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= sum);
    // Polish with a few power steps; the fixed point is attracting.
    let mut steps = 0;
    while stationarity_residual(transition, &p) > STOCHASTIC_TOL / 10.0 && steps < 1000 {
        p = transition.vec_mul(&p);
        let sum: f64 = p.iter().sum();
        p.iter_mut().for_each(|x| *x /= sum);
        steps += 1;
    }
    if p.iter().any(|&x| x <= 0.0) {
        return Err(Error::NotPrimitive);
    }
    Ok(p)
}

/// Gaussian elimination with partial pivoting.
fn solve_dense(d: usize, mut a: Vec<f64>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    for col in 0..d {
        let pivot = (col..d).max_by(|&r, &s| a[r * d + col].abs().total_cmp(&a[s * d + col].abs()))?;
        if a[pivot * d + col].abs() < 1e-300 {
            return None;
        }
        if pivot != col {
            for j in 0..d {
                a.swap(pivot * d + j, col * d + j);
            }
            b.swap(pivot, col);
        }
        for r in col + 1..d {
            let factor = a[r * d + col] / a[col * d + col];
            if factor != 0.0 {
                for j in col..d {
                    a[r * d + j] -= factor * a[col * d + j];
                }
                b[r] -= factor * b[col];
            }
        }
    }
    let mut x = vec![0.0; d];
    for r in (0..d).rev() {
        let tail: f64 = (r + 1..d).map(|j| a[r * d + j] * x[j]).sum();
        x[r] = (b[r] - tail) / a[r * d + r];
    }
    Some(x)
}

fn cumulative(row: &[f64]) -> Vec<f64> {
    row.iter()
        .scan(0.0, |acc, &p| {
            *acc += p;
            Some(*acc)
        })
        .collect()
}

impl MarkovMeasure {
    /// Markov measure of a compatible primitive stochastic matrix; the
    /// stationary vector is solved for.
    pub fn new(sft: &Sft, transition: SquareMatrix) -> Result<Self> {
        validate_stochastic(sft, &transition)?;
        let stationary = stationary_vector(&transition)?;
        Ok(Self::assemble(sft, transition, stationary))
    }

    /// Markov measure with a caller-supplied stationary vector, which is
    /// checked rather than solved for. Allows chains with transient symbols.
    pub fn with_stationary(sft: &Sft, transition: SquareMatrix, stationary: Vec<f64>) -> Result<Self> {
        validate_stochastic(sft, &transition)?;
        if stationary.len() != sft.d() {
            return Err(Error::DimensionMismatch {
                expected: sft.d(),
                found: stationary.len(),
            });
        }
        let sum: f64 = stationary.iter().sum();
        if stationary.iter().any(|x| !(0.0..=1.0).contains(x)) || (sum - 1.0).abs() > STOCHASTIC_TOL {
            return Err(Error::InvalidParameter("not a probability vector".into()));
        }
        let residual = stationarity_residual(&transition, &stationary);
        if residual > STOCHASTIC_TOL {
            return Err(Error::InvalidParameter(format!(
                "vector is not stationary (residual {residual:e})"
            )));
        }
        Ok(Self::assemble(sft, transition, stationary))
    }

    /// I.i.d. measure with symbol probabilities `probs`; every transition
    /// with positive mass must be an edge.
    pub fn bernoulli(sft: &Sft, probs: &[f64]) -> Result<Self> {
        let d = sft.d();
        if probs.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: probs.len(),
            });
        }
        let data = (0..d).flat_map(|_| probs.iter().copied()).collect();
        Self::with_stationary(sft, SquareMatrix::new(d, data)?, probs.to_vec())
    }

    fn assemble(sft: &Sft, transition: SquareMatrix, stationary: Vec<f64>) -> Self {
        let d = sft.d();
        let log_transition = transition.as_slice().iter().map(|p| p.ln()).collect();
        let cumulative_rows = (0..d).flat_map(|i| cumulative(transition.row(i))).collect();
        let cumulative_start = cumulative(&stationary);
        MarkovMeasure {
            sft: sft.clone(),
            transition,
            stationary,
            log_transition,
            cumulative_rows,
            cumulative_start,
        }
    }

    pub fn sft(&self) -> &Sft {
        &self.sft
    }

    pub fn d(&self) -> usize {
        self.sft.d()
    }

    pub fn transition(&self) -> &SquareMatrix {
        &self.transition
    }

    pub fn stationary(&self) -> &[f64] {
        &self.stationary
    }

    /// `-log P(a, b)`; infinite on forbidden transitions.
    #[inline]
    pub fn neg_log_transition(&self, a: Symbol, b: Symbol) -> f64 {
        -self.log_transition[a as usize * self.d() + b as usize]
    }

    /// `p(w₀) Π P(w_i, w_{i+1})`; zero for words that are not admissible.
    pub fn cylinder_measure(&self, w: &[Symbol]) -> Result<f64> {
        if w.len() > LOG_SPACE_THRESHOLD {
            return Ok(self.log_cylinder_measure(w)?.exp());
        }
        self.sft.check_symbols(w)?;
        let Some(&first) = w.first() else {
            return Ok(1.0);
        };
        let d = self.d();
        Ok(w.windows(2).fold(self.stationary[first as usize], |acc, p| {
            acc * self.transition.as_slice()[p[0] as usize * d + p[1] as usize]
        }))
    }

    /// Natural log of [`cylinder_measure`](Self::cylinder_measure), `-inf`
    /// for null cylinders.
    pub fn log_cylinder_measure(&self, w: &[Symbol]) -> Result<f64> {
        self.sft.check_symbols(w)?;
        let Some(&first) = w.first() else {
            return Ok(0.0);
        };
        let d = self.d();
        let mut acc = KahanSum::new(self.stationary[first as usize].ln());
        for p in w.windows(2) {
            acc.add(self.log_transition[p[0] as usize * d + p[1] as usize]);
        }
        Ok(acc.value())
    }

    /// Entropy `Σᵢ p(i) Σⱼ −P(i,j) log P(i,j)` with `0 log 0 = 0`.
    pub fn entropy(&self) -> f64 {
        let d = self.d();
        (0..d)
            .map(|i| {
                let row: f64 = self
                    .transition
                    .row(i)
                    .iter()
                    .filter(|&&p| p > 0.0)
                    .map(|&p| -p * p.ln())
                    .sum();
                self.stationary[i] * row
            })
            .sum()
    }

    /// A path of length `n` drawn from the measure with the SplitMix64 stream
    /// of `seed`: the first symbol from the stationary vector, then one
    /// transition per symbol.
    pub fn sample_path(&self, n: usize, seed: u64) -> Word {
        let mut rng = SymbolRng::new(seed);
        let mut out = Vec::with_capacity(n);
        if n == 0 {
            return Word::new(out);
        }
        let d = self.d();
        let mut cur = rng.pick(&self.cumulative_start);
        out.push(cur as Symbol);
        for _ in 1..n {
            cur = rng.pick(&self.cumulative_rows[cur * d..(cur + 1) * d]);
            out.push(cur as Symbol);
        }
        Word::new(out)
    }
}

pub fn markov_entropy(mu: &MarkovMeasure) -> f64 {
    mu.entropy()
}

/// Divides each row by its sum. Used to absorb eigenvector round-off in the
/// Parry-type transition formula.
fn renormalise_rows(m: &SquareMatrix) -> SquareMatrix {
    let d = m.dim();
    let data = (0..d)
        .flat_map(|i| {
            let row = m.row(i);
            let s: f64 = row.iter().sum();
            row.iter().map(move |x| x / s).collect::<Vec<_>>()
        })
        .collect();
    SquareMatrix::new(d, data).expect("same dimension")
}

/// `Φ(a, b) = W(a, b) v(b) / (λ v(a))`
fn conjugated_transition(weights: &SquareMatrix, spectral: &SpectralData) -> SquareMatrix {
    let d = weights.dim();
    let data = (0..d)
        .flat_map(|a| {
            (0..d).map(move |b| weights.get(a, b) * spectral.v[b] / (spectral.lambda * spectral.v[a]))
        })
        .collect();
    renormalise_rows(&SquareMatrix::new(d, data).expect("same dimension"))
}

/// The Parry measure: `P(i,j) = A(i,j) v(j) / (λ v(i))`, `p(i) = u(i) v(i)`.
pub fn parry_measure(sft: &Sft, spectral: &SpectralData) -> Result<MarkovMeasure> {
    let adjacency = SquareMatrix::new(sft.d(), sft.matrix_f64())?;
    let transition = conjugated_transition(&adjacency, spectral);
    let p: Vec<f64> = spectral.u.iter().zip(&spectral.v).map(|(a, b)| a * b).collect();
    let sum: f64 = p.iter().sum();
    let p = p.into_iter().map(|x| x / sum).collect();
    MarkovMeasure::with_stationary(sft, transition, p)
}

/// Parry mass of an admissible word `i w j` of length `n + 1`:
/// `u(i) v(j) / λ^n`. Depends only on the end symbols and the length.
pub fn parry_cylinder_closed_form(sft: &Sft, spectral: &SpectralData, w: &[Symbol]) -> Result<f64> {
    if w.is_empty() {
        return Err(Error::InvalidParameter("empty word".into()));
    }
    if !sft.is_admissible(w)? {
        return Err(Error::NotAdmissible);
    }
    let first = w[0] as usize;
    let last = w[w.len() - 1] as usize;
    let n = (w.len() - 1) as f64;
    Ok((spectral.u[first].ln() + spectral.v[last].ln() - n * spectral.lambda.ln()).exp())
}

/// A potential depending on the first two symbols, defined on the admissible
/// 2-words.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TwoBlockPotential {
    d: usize,
    values: Vec<Option<f64>>,
}

impl TwoBlockPotential {
    pub fn zero(sft: &Sft) -> Self {
        let d = sft.d();
        let values = (0..d * d)
            .map(|k| sft.edge((k / d) as Symbol, (k % d) as Symbol).then_some(0.0))
            .collect();
        TwoBlockPotential { d, values }
    }

    /// Zero everywhere except on the listed admissible pairs.
    pub fn from_pairs(sft: &Sft, pairs: &[((Symbol, Symbol), f64)]) -> Result<Self> {
        let mut phi = Self::zero(sft);
        for &((a, b), value) in pairs {
            sft.check_symbols(&[a, b])?;
            if !sft.edge(a, b) {
                return Err(Error::NotAdmissible);
            }
            if !value.is_finite() {
                return Err(Error::InvalidParameter(format!("potential value {value}")));
            }
            phi.values[a as usize * phi.d + b as usize] = Some(value);
        }
        Ok(phi)
    }

    pub fn get(&self, a: Symbol, b: Symbol) -> Option<f64> {
        self.values[a as usize * self.d + b as usize]
    }

    /// `(a, b, φ(a, b))` over admissible pairs.
    pub fn iter(&self) -> impl Iterator<Item = (Symbol, Symbol, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter_map(move |(k, v)| v.map(|x| ((k / self.d) as Symbol, (k % self.d) as Symbol, x)))
    }

    /// `D(a, b) = exp(φ(a, b))` on admissible pairs, 0 elsewhere.
    pub fn weight_matrix(&self) -> SquareMatrix {
        let data = self.values.iter().map(|v| v.map_or(0.0, f64::exp)).collect();
        SquareMatrix::new(self.d, data).expect("d x d values")
    }
}

/// Equilibrium state of a two-block potential together with the data it was
/// built from.
#[derive(Clone, Debug)]
pub struct EquilibriumData {
    pub potential: TwoBlockPotential,
    /// `D(a, b) = exp(φ(a, b))`
    pub weights: SquareMatrix,
    /// Eigendata `(ρ, u, v)` of the weight matrix.
    pub spectral: SpectralData,
    /// `Φ(a, b) = D(a, b) v(b) / (ρ v(a))`
    pub transition: SquareMatrix,
    pub measure: MarkovMeasure,
    /// `log ρ`
    pub pressure: f64,
}

pub fn equilibrium_state(sft: &Sft, phi: &TwoBlockPotential, tol: f64) -> Result<EquilibriumData> {
    let weights = phi.weight_matrix();
    let spectral = dominant_eigendata(&weights, tol)?;
    let transition = conjugated_transition(&weights, &spectral);
    let measure = MarkovMeasure::new(sft, transition.clone())?;
    Ok(EquilibriumData {
        potential: phi.clone(),
        pressure: spectral.lambda.ln(),
        weights,
        spectral,
        transition,
        measure,
    })
}

impl EquilibriumData {
    pub fn rho(&self) -> f64 {
        self.spectral.lambda
    }

    pub fn entropy(&self) -> f64 {
        self.measure.entropy()
    }

    /// `log μ([i₀ … i_{n−1}]) = log u(i₀) + Σ φ(i_j, i_{j+1}) + log v(i_{n−1}) − (n−1) log ρ`;
    /// a single symbol gets `log(u(i) v(i))`.
    pub fn log_cylinder_measure(&self, w: &[Symbol]) -> Result<f64> {
        let sft = self.measure.sft();
        if w.is_empty() {
            return Err(Error::InvalidParameter("empty word".into()));
        }
        if !sft.is_admissible(w)? {
            return Err(Error::NotAdmissible);
        }
        let first = w[0] as usize;
        let last = w[w.len() - 1] as usize;
        let mut acc = KahanSum::new(self.spectral.u[first].ln());
        for p in w.windows(2) {
            acc.add(self.weights.get(p[0] as usize, p[1] as usize).ln());
        }
        acc.add(self.spectral.v[last].ln());
        acc.add(-((w.len() - 1) as f64) * self.pressure);
        Ok(acc.value())
    }

    /// Cylinder mass through the eigendata of `D` rather than through `Φ`.
    pub fn cylinder_measure(&self, w: &[Symbol]) -> Result<f64> {
        if w.len() > LOG_SPACE_THRESHOLD {
            return Ok(self.log_cylinder_measure(w)?.exp());
        }
        let sft = self.measure.sft();
        if w.is_empty() {
            return Err(Error::InvalidParameter("empty word".into()));
        }
        if !sft.is_admissible(w)? {
            return Err(Error::NotAdmissible);
        }
        let first = w[0] as usize;
        let last = w[w.len() - 1] as usize;
        let product: f64 = w
            .windows(2)
            .map(|p| self.weights.get(p[0] as usize, p[1] as usize))
            .product();
        Ok(self.spectral.u[first] * product * self.spectral.v[last]
            / self.rho().powi((w.len() - 1) as i32))
    }
}

pub fn equilibrium_cylinder_measure(eq: &EquilibriumData, w: &[Symbol]) -> Result<f64> {
    eq.cylinder_measure(w)
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub fn new(initial: f64) -> Self {
        KahanSum {
            sum: initial,
            compensation: 0.0,
        }
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}
