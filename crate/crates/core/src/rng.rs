//! Seeded randomness.
//!
//! All sampling goes through SplitMix64 seeded directly with the user seed.
//! One 64-bit output is consumed per sampled symbol and mapped to `[0, 1)` by
//! dividing by `2^64`; the symbol is the first whose cumulative row
//! probability exceeds that value, scanning symbols in increasing order.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

const TWO_POW_64: f64 = 18_446_744_073_709_551_616.0;

#[derive(Clone, Debug)]
pub struct SymbolRng {
    inner: SplitMix64,
}

impl SymbolRng {
    pub fn new(seed: u64) -> Self {
        SymbolRng {
            inner: SplitMix64::from_seed(seed.to_le_bytes()),
        }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    #[inline]
    pub fn next_unit(&mut self) -> f64 {
        self.next_u64() as f64 / TWO_POW_64
    }

    /// Inverse-CDF draw from cumulative sums `cumulative` (non-decreasing,
    /// last entry ~1). Values that land beyond the last cumulative sum due to
    /// rounding select the last symbol with positive mass.
    #[inline]
    pub fn pick(&mut self, cumulative: &[f64]) -> usize {
        let r = self.next_unit();
        match cumulative.iter().position(|&c| r < c) {
            Some(j) => j,
            None => last_positive(cumulative),
        }
    }
}

fn last_positive(cumulative: &[f64]) -> usize {
    let mut prev = 0.0;
    let mut last = 0;
    for (j, &c) in cumulative.iter().enumerate() {
        if c > prev {
            last = j;
        }
        prev = c;
    }
    last
}

/// `count` sub-seeds drawn from the SplitMix64 stream of `base`.
pub fn derive_seeds(base: u64, count: usize) -> Vec<u64> {
    let mut rng = SymbolRng::new(base);
    (0..count).map(|_| rng.next_u64()).collect()
}
