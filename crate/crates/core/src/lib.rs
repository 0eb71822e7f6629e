//! Irregular points of mixing subshifts of finite type.
//!
//! The crate builds, for a topologically mixing one-sided subshift of finite
//! type, two words `ξ = w s w` and `η = w t w` that can only overlap in their
//! `w` blocks, a family of Markov equilibrium states `μ_q` that separate the
//! two words, and the substitution map `L` that swaps `ξ` and `η` on
//! alternating factorial index ranges. Points that are typical for `μ_q` are
//! sent by `L` to points whose Birkhoff averages oscillate. The [`analysis`]
//! module measures that oscillation, together with the entropy and dimension
//! estimates that accompany it, on long finite prefixes.

pub mod analysis;
pub mod construction;
pub mod error;
pub mod matrix;
pub mod measures;
pub mod rng;
pub mod sft;
pub mod spectral;
pub mod substitution;
pub mod verify;

pub use error::{Error, Result};
pub use matrix::SquareMatrix;
pub use measures::{EquilibriumData, MarkovMeasure, TwoBlockPotential};
pub use sft::{SeparationIndex, Sft, Symbol, Word};
pub use spectral::SpectralData;
