//! The factorial-zone substitution map `L` and the involution `ι`.
//!
//! Index ranges `[(2k)!, (2k+1)!]` are frozen. A window starting in
//! `[(2k−1)!+1, (2k)!−1−M]` that reads `ξ` is rewritten to `η` and vice
//! versa. Since `ξ = w s w` and `η = w t w` share their `w` blocks, only the
//! middle block is ever written, and matches are always taken against the
//! input so the order of rewrites is irrelevant. `ι` performs the same swap
//! at every position regardless of zones.
//!
//! Starts covered by neither rule (0, 1 and the tail `[(2k)!−M, (2k)!−1]`
//! of each swap range) leave the input untouched.

use rayon::prelude::*;

use crate::construction::WordSystem;
use crate::error::{Error, Result};
use crate::sft::{Symbol, Word};

/// Largest `n` with `n!` representable in 64 bits.
pub const MAX_FACTORIAL: usize = 20;

/// Inputs at least this long are rewritten in parallel chunks.
const PARALLEL_THRESHOLD: usize = 1 << 22;
const CHUNK_LEN: usize = 1 << 20;

/// `n!` for `n <= 20`.
pub fn factorial(n: usize) -> u64 {
    assert!(n <= MAX_FACTORIAL, "{n}! overflows u64");
    (1..=n as u64).product()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Zone {
    Frozen(u32),
    SwapEligible(u32),
    Unzoned,
}

/// An inclusive index range attached to a zone number `k >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZoneRange {
    pub k: u32,
    pub start: u64,
    pub end: u64,
}

impl ZoneRange {
    pub fn contains(&self, i: u64) -> bool {
        self.start <= i && i <= self.end
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZoneTable {
    /// `factorials[n] = n!`
    factorials: Vec<u64>,
    word_len: usize,
    frozen: Vec<ZoneRange>,
    swap: Vec<ZoneRange>,
}

impl ZoneTable {
    pub fn new(word_len: usize) -> Self {
        let factorials: Vec<u64> = (0..=MAX_FACTORIAL).map(factorial).collect();
        let last = factorials[MAX_FACTORIAL] - 1;
        let mut frozen = Vec::new();
        let mut swap = Vec::new();
        for k in 1.. {
            let (lo, hi) = (2 * k - 1, 2 * k);
            if lo > MAX_FACTORIAL {
                break;
            }
            let start = factorials[lo] + 1;
            if hi <= MAX_FACTORIAL {
                if let Some(end) = factorials[hi].checked_sub(1 + word_len as u64) {
                    if start <= end {
                        swap.push(ZoneRange { k: k as u32, start, end });
                    }
                }
            }
            if 2 * k + 1 <= MAX_FACTORIAL {
                frozen.push(ZoneRange {
                    k: k as u32,
                    start: factorials[2 * k],
                    end: factorials[2 * k + 1].min(last),
                });
            }
        }
        ZoneTable {
            factorials,
            word_len,
            frozen,
            swap,
        }
    }

    pub fn word_len(&self) -> usize {
        self.word_len
    }

    pub fn factorials(&self) -> &[u64] {
        &self.factorials
    }

    pub fn frozen_ranges(&self) -> &[ZoneRange] {
        &self.frozen
    }

    /// Non-empty swap ranges; for `k = 1` the range is always empty.
    pub fn swap_ranges(&self) -> &[ZoneRange] {
        &self.swap
    }

    pub fn zone_of(&self, i: u64) -> Result<Zone> {
        if i > self.factorials[MAX_FACTORIAL] - 1 {
            return Err(Error::IndexOverflow(i));
        }
        if let Some(r) = self.frozen.iter().find(|r| r.contains(i)) {
            return Ok(Zone::Frozen(r.k));
        }
        if let Some(r) = self.swap.iter().find(|r| r.contains(i)) {
            return Ok(Zone::SwapEligible(r.k));
        }
        Ok(Zone::Unzoned)
    }

    #[inline]
    pub fn is_swap_start(&self, i: usize) -> bool {
        let i = i as u64;
        self.swap.iter().any(|r| r.contains(i))
    }

    #[inline]
    pub fn is_frozen(&self, i: usize) -> bool {
        let i = i as u64;
        self.frozen.iter().any(|r| r.contains(i))
    }
}

pub fn zone_of(i: u64, word_len: usize) -> Result<Zone> {
    ZoneTable::new(word_len).zone_of(i)
}

/// Start indices of every (possibly overlapping) occurrence of `pattern` in
/// `x`, found with a Knuth–Morris–Pratt scan.
pub fn find_occurrences(x: &[Symbol], pattern: &[Symbol]) -> Vec<usize> {
    let m = pattern.len();
    if m == 0 || m > x.len() {
        return Vec::new();
    }
    let mut failure = vec![0usize; m];
    let mut k = 0;
    for i in 1..m {
        while k > 0 && pattern[i] != pattern[k] {
            k = failure[k - 1];
        }
        if pattern[i] == pattern[k] {
            k += 1;
        }
        failure[i] = k;
    }
    let mut out = Vec::new();
    let mut k = 0;
    for (i, &c) in x.iter().enumerate() {
        while k > 0 && c != pattern[k] {
            k = failure[k - 1];
        }
        if c == pattern[k] {
            k += 1;
        }
        if k == m {
            out.push(i + 1 - m);
            k = failure[k - 1];
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstitutionMap {
    xi: Word,
    eta: Word,
    w_len: usize,
    zones: ZoneTable,
}

impl SubstitutionMap {
    /// `xi` and `eta` must have equal length and share their first and last
    /// `w_len` symbols, with `2 * w_len < |xi|`.
    pub fn new(xi: Word, eta: Word, w_len: usize) -> Result<Self> {
        if xi.len() != eta.len() {
            return Err(Error::PatternMismatch(xi.len(), eta.len()));
        }
        let m = xi.len();
        if 2 * w_len >= m {
            return Err(Error::InvalidParameter(format!(
                "outer block length {w_len} leaves no middle in words of length {m}"
            )));
        }
        if xi[..w_len] != eta[..w_len] || xi[m - w_len..] != eta[m - w_len..] {
            return Err(Error::InvalidParameter("xi and eta do not share their outer blocks".into()));
        }
        Ok(SubstitutionMap {
            zones: ZoneTable::new(m),
            xi,
            eta,
            w_len,
        })
    }

    pub fn from_word_system(ws: &WordSystem) -> Result<Self> {
        Self::new(ws.xi.clone(), ws.eta.clone(), ws.w.len())
    }

    pub fn xi(&self) -> &Word {
        &self.xi
    }

    pub fn eta(&self) -> &Word {
        &self.eta
    }

    pub fn word_len(&self) -> usize {
        self.xi.len()
    }

    pub fn outer_len(&self) -> usize {
        self.w_len
    }

    pub fn zones(&self) -> &ZoneTable {
        &self.zones
    }

    /// `L` on a finite prefix. Indices `>= n − M + 1` may differ from the image
    /// of an infinite extension, since windows that run past the end are left
    /// alone.
    pub fn apply_l(&self, x: &[Symbol]) -> Word {
        self.rewrite(x, |i| self.zones.is_swap_start(i))
    }

    /// `ι`: swap `ξ ↔ η` at every occurrence.
    pub fn apply_involution(&self, x: &[Symbol]) -> Word {
        self.rewrite(x, |_| true)
    }

    /// Single-threaded `L`, kept as the reference for the chunked version.
    pub fn apply_l_sequential(&self, x: &[Symbol]) -> Word {
        let mut out = x.to_vec();
        self.rewrite_chunk(x, &mut out, 0, &|i| self.zones.is_swap_start(i));
        Word::new(out)
    }

    fn rewrite(&self, x: &[Symbol], eligible: impl Fn(usize) -> bool + Sync) -> Word {
        let mut out = x.to_vec();
        if x.len() < PARALLEL_THRESHOLD {
            self.rewrite_chunk(x, &mut out, 0, &eligible);
        } else {
            self.rewrite_chunked(x, &mut out, CHUNK_LEN, &eligible);
        }
        Word::new(out)
    }

    fn rewrite_chunked(
        &self,
        x: &[Symbol],
        out: &mut [Symbol],
        chunk_len: usize,
        eligible: &(impl Fn(usize) -> bool + Sync),
    ) {
        out.par_chunks_mut(chunk_len)
            .enumerate()
            .for_each(|(c, chunk)| self.rewrite_chunk(x, chunk, c * chunk_len, eligible));
    }

    /// Rewrites `out`, which mirrors `x[offset .. offset + out.len()]`, for every
    /// eligible window whose middle block meets that range. Windows are
    /// scanned from `M − 1` symbols left of the chunk.
    fn rewrite_chunk(
        &self,
        x: &[Symbol],
        out: &mut [Symbol],
        offset: usize,
        eligible: &impl Fn(usize) -> bool,
    ) {
        let m = self.xi.len();
        let n = x.len();
        if n < m {
            return;
        }
        let lo = offset.saturating_sub(m - 1);
        let hi = (offset + out.len() + m - 1).min(n);
        let w = &self.xi[..self.w_len];
        let mid = self.w_len..m - self.w_len;
        for rel in find_occurrences(&x[lo..hi], w) {
            let i = lo + rel;
            if i + m > n || !eligible(i) {
                continue;
            }
            let window = &x[i..i + m];
            let replacement = if window == &self.xi[..] {
                &self.eta[mid.clone()]
            } else if window == &self.eta[..] {
                &self.xi[mid.clone()]
            } else {
                continue;
            };
            let write_start = i + mid.start;
            let from = write_start.max(offset);
            let to = (write_start + replacement.len()).min(offset + out.len());
            if from < to {
                out[from - offset..to - offset]
                    .copy_from_slice(&replacement[from - write_start..to - write_start]);
            }
        }
    }
}
