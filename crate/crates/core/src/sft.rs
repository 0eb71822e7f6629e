//! Alphabets, words and one-sided subshifts of finite type.
//!
//! An [`Sft`] is the set of one-sided sequences over `{0, .., d-1}` whose
//! consecutive symbols are edges of a 0/1 adjacency matrix. Besides the
//! admissibility and enumeration primitives this module carries the graph
//! searches (minimal cycles, shortest connecting paths, paths of a prescribed
//! length) that the word construction relies on. Every search breaks ties
//! lexicographically so constructions are reproducible.

use std::collections::VecDeque;
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Symbol = u8;

/// Default upper bound on the length accepted by [`Sft::words`].
pub const DEFAULT_WORD_CAP: usize = 20;

/// Largest supported alphabet (symbols are stored as bytes).
pub const MAX_ALPHABET: usize = 256;

/// A finite word over the alphabet.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    /// Parses a word written as a string of decimal digits, e.g. `"10001"`.
    /// Only usable for alphabets with at most ten symbols.
    pub fn parse(digits: &str) -> Result<Self> {
        digits
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|v| v as Symbol)
                    .ok_or_else(|| Error::InvalidParameter(format!("not a digit: {c:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn as_slice(&self) -> &[Symbol] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Symbol> {
        self.0
    }

    /// `self` repeated `times` times.
    pub fn repeat(&self, times: usize) -> Word {
        Word(self.0.repeat(times))
    }

    pub fn concat(parts: &[&[Symbol]]) -> Word {
        Word(parts.concat())
    }
}

impl Deref for Word {
    type Target = [Symbol];

    fn deref(&self) -> &[Symbol] {
        &self.0
    }
}

impl From<Vec<Symbol>> for Word {
    fn from(v: Vec<Symbol>) -> Self {
        Word(v)
    }
}

impl From<&[Symbol]> for Word {
    fn from(v: &[Symbol]) -> Self {
        Word(v.to_vec())
    }
}

impl FromIterator<Symbol> for Word {
    fn from_iter<I: IntoIterator<Item = Symbol>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&s| s < 10) {
            for s in &self.0 {
                write!(f, "{s}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
            write!(f, "[{}]", parts.join(","))
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// Index of the first disagreement of two equal-length words.
///
/// The symbolic metric is `d(x, y) = exp(-index)` for `x != y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeparationIndex {
    At(usize),
    Identical,
}

impl SeparationIndex {
    /// Distance in the symbolic metric.
    pub fn distance(self) -> f64 {
        match self {
            SeparationIndex::At(i) => (-(i as f64)).exp(),
            SeparationIndex::Identical => 0.0,
        }
    }

    /// The index, treating identical words as separated at `len`.
    pub fn or_len(self, len: usize) -> usize {
        match self {
            SeparationIndex::At(i) => i,
            SeparationIndex::Identical => len,
        }
    }
}

pub fn separation_index(x: &[Symbol], y: &[Symbol]) -> Result<SeparationIndex> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    Ok(x.iter()
        .zip(y)
        .position(|(a, b)| a != b)
        .map_or(SeparationIndex::Identical, SeparationIndex::At))
}

/// Square boolean matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
struct BoolMatrix {
    d: usize,
    cells: Vec<bool>,
}

impl BoolMatrix {
    fn mul(&self, other: &BoolMatrix) -> BoolMatrix {
        let d = self.d;
        let mut cells = vec![false; d * d];
        for i in 0..d {
            for k in 0..d {
                if self.cells[i * d + k] {
                    for j in 0..d {
                        cells[i * d + j] |= other.cells[k * d + j];
                    }
                }
            }
        }
        BoolMatrix { d, cells }
    }

    fn all_positive(&self) -> bool {
        self.cells.iter().all(|&c| c)
    }

    fn pow(&self, mut exp: usize) -> BoolMatrix {
        let d = self.d;
        let mut acc = BoolMatrix {
            d,
            cells: (0..d * d).map(|k| k / d == k % d).collect(),
        };
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            exp >>= 1;
        }
        acc
    }
}

/// Wielandt's bound `(d-1)^2 + 1` on the primitivity exponent.
pub fn wielandt_bound(d: usize) -> usize {
    (d - 1) * (d - 1) + 1
}

/// Whether the `d x d` support pattern has an entrywise positive power.
///
/// Once some power `A^k` is positive every higher power is, so it suffices
/// to test `A^W` for the Wielandt bound `W`.
pub fn is_primitive_pattern(d: usize, pattern: &[bool]) -> bool {
    assert_eq!(pattern.len(), d * d, "pattern must be d x d");
    if d == 0 {
        return false;
    }
    let m = BoolMatrix {
        d,
        cells: pattern.to_vec(),
    };
    m.pow(wielandt_bound(d)).all_positive()
}

/// A one-sided topological Markov shift.
#[derive(Clone, PartialEq, Eq)]
pub struct Sft {
    d: usize,
    adj: Vec<bool>,
}

impl fmt::Debug for Sft {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Sft")
            .field("d", &self.d)
            .field("matrix", &self.matrix())
            .finish()
    }
}

impl Sft {
    /// Validates a `d x d` 0/1 adjacency matrix.
    pub fn new(d: usize, matrix: &[Vec<u64>]) -> Result<Sft> {
        if !(2..=MAX_ALPHABET).contains(&d) {
            return Err(Error::AlphabetSize(d));
        }
        if matrix.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: matrix.len(),
            });
        }
        let mut adj = Vec::with_capacity(d * d);
        for (row, entries) in matrix.iter().enumerate() {
            if entries.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: entries.len(),
                });
            }
            for (col, &value) in entries.iter().enumerate() {
                match value {
                    0 => adj.push(false),
                    1 => adj.push(true),
                    _ => return Err(Error::InvalidEntry { row, col, value }),
                }
            }
        }
        for s in 0..d {
            let row_ok = (0..d).any(|j| adj[s * d + j]);
            let col_ok = (0..d).any(|i| adj[i * d + s]);
            if !row_ok || !col_ok {
                return Err(Error::StrandedSymbol(s));
            }
        }
        Ok(Sft { d, adj })
    }

    /// Full shift on `d` symbols.
    pub fn full(d: usize) -> Result<Sft> {
        Sft::new(d, &vec![vec![1; d]; d])
    }

    /// Golden-mean shift: the word `11` is forbidden.
    pub fn golden_mean() -> Sft {
        Sft::new(2, &[vec![1, 1], vec![1, 0]]).expect("valid matrix")
    }

    pub fn d(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn edge(&self, a: Symbol, b: Symbol) -> bool {
        self.adj[a as usize * self.d + b as usize]
    }

    pub fn successors(&self, a: Symbol) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.d)
            .filter(move |&b| self.adj[a as usize * self.d + b])
            .map(|b| b as Symbol)
    }

    pub fn matrix(&self) -> Vec<Vec<u64>> {
        self.adj
            .chunks(self.d)
            .map(|row| row.iter().map(|&e| e as u64).collect())
            .collect()
    }

    /// Adjacency matrix as floats, row-major.
    pub fn matrix_f64(&self) -> Vec<f64> {
        self.adj.iter().map(|&e| if e { 1.0 } else { 0.0 }).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().filter(|&&e| e).count()
    }

    pub fn is_full(&self) -> bool {
        self.adj.iter().all(|&e| e)
    }

    /// True iff some power `A^k` with `k <= (d-1)^2 + 1` is entrywise positive.
    pub fn is_aperiodic(&self) -> bool {
        is_primitive_pattern(self.d, &self.adj)
    }

    fn check_symbol(&self, s: Symbol) -> Result<()> {
        if (s as usize) < self.d {
            Ok(())
        } else {
            Err(Error::SymbolOutOfRange {
                symbol: s as usize,
                d: self.d,
            })
        }
    }

    pub fn check_symbols(&self, w: &[Symbol]) -> Result<()> {
        w.iter().try_for_each(|&s| self.check_symbol(s))
    }

    pub fn is_admissible(&self, w: &[Symbol]) -> Result<bool> {
        self.check_symbols(w)?;
        Ok(w.windows(2).all(|p| self.edge(p[0], p[1])))
    }

    /// All admissible words of length `n` in lexicographic order, with the
    /// default length cap.
    pub fn words(&self, n: usize) -> Result<Vec<Word>> {
        self.words_with_cap(n, DEFAULT_WORD_CAP)
    }

    pub fn words_with_cap(&self, n: usize, cap: usize) -> Result<Vec<Word>> {
        if n > cap {
            return Err(Error::CapExceeded { n, cap });
        }
        if n == 0 {
            return Err(Error::InvalidParameter("word length must be >= 1".into()));
        }
        let mut out = Vec::new();
        let mut stack = Vec::with_capacity(n);
        for s in 0..self.d as Symbol {
            stack.push(s);
            self.extend_words(&mut stack, n, &mut out);
            stack.pop();
        }
        Ok(out)
    }

    fn extend_words(&self, stack: &mut Vec<Symbol>, n: usize, out: &mut Vec<Word>) {
        if stack.len() == n {
            out.push(Word(stack.clone()));
            return;
        }
        let last = *stack.last().expect("non-empty");
        for b in self.successors(last) {
            stack.push(b);
            self.extend_words(stack, n, out);
            stack.pop();
        }
    }

    /// Number of admissible words of length `n >= 1`: the sum of the entries
    /// of `A^(n-1)`, computed with integer arithmetic.
    pub fn count_words(&self, n: usize) -> u128 {
        assert!(n >= 1);
        let d = self.d;
        let mut ends = vec![1u128; d];
        for _ in 1..n {
            let mut next = vec![0u128; d];
            for a in 0..d {
                for b in 0..d {
                    if self.adj[a * d + b] {
                        next[b] += ends[a];
                    }
                }
            }
            ends = next;
        }
        ends.iter().sum()
    }

    /// Distance (in edges) from every symbol to `target`, walking only through
    /// symbols allowed by `interior`. The target itself is at distance 0.
    fn distances_to(&self, target: Symbol, interior: impl Fn(Symbol) -> bool) -> Vec<Option<usize>> {
        let d = self.d;
        let mut dist = vec![None; d];
        dist[target as usize] = Some(0);
        let mut queue = VecDeque::from([target]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize].expect("queued nodes have distances");
            for v in 0..d {
                if self.adj[v * d + u as usize] && dist[v].is_none() && interior(v as Symbol) {
                    dist[v] = Some(du + 1);
                    queue.push_back(v as Symbol);
                }
            }
        }
        dist
    }

    /// Length of the shortest cycle through `s`, if any.
    fn shortest_return(&self, s: Symbol) -> Option<usize> {
        let dist = self.distances_to(s, |_| true);
        self.successors(s)
            .filter_map(|u| dist[u as usize].map(|k| k + 1))
            .min()
    }

    /// The lexicographically first shortest cycle `β₁ … β_κ`.
    pub fn minimal_cycle(&self) -> Result<Word> {
        self.minimal_cycles()?
            .into_iter()
            .next()
            .ok_or(Error::NoCycle)
    }

    /// Every cycle of minimal length, written from each of its starting
    /// symbols, in lexicographic order. Rotations of one cycle appear as
    /// separate entries.
    pub fn minimal_cycles(&self) -> Result<Vec<Word>> {
        let kappa = (0..self.d as Symbol)
            .filter_map(|s| self.shortest_return(s))
            .min()
            .ok_or(Error::NoCycle)?;
        let mut cycles = Vec::new();
        for s in 0..self.d as Symbol {
            if self.shortest_return(s) != Some(kappa) {
                continue;
            }
            let dist = self.distances_to(s, |_| true);
            let mut stack = vec![s];
            self.extend_cycles(s, kappa, &dist, &mut stack, &mut cycles);
        }
        Ok(cycles)
    }

    // A closed walk of minimal length is a simple cycle, so pruning by
    // distance-to-start is exact.
    fn extend_cycles(
        &self,
        start: Symbol,
        kappa: usize,
        dist: &[Option<usize>],
        stack: &mut Vec<Symbol>,
        out: &mut Vec<Word>,
    ) {
        let last = *stack.last().expect("non-empty");
        let remaining = kappa - (stack.len() - 1);
        if remaining == 1 {
            if self.edge(last, start) {
                out.push(Word(stack.clone()));
            }
            return;
        }
        for u in self.successors(last) {
            if u == start {
                continue;
            }
            if dist[u as usize].is_some_and(|k| k < remaining) {
                stack.push(u);
                self.extend_cycles(start, kappa, dist, stack, out);
                stack.pop();
            }
        }
    }

    /// Interior of the lexicographically first shortest path `from → to`
    /// whose interior symbols avoid `avoid`. Empty when `from → to` is an
    /// edge. The endpoints themselves are never restricted.
    pub fn shortest_path(&self, from: Symbol, to: Symbol, avoid: &[Symbol]) -> Result<Word> {
        self.check_symbol(from)?;
        self.check_symbol(to)?;
        self.check_symbols(avoid)?;
        if self.edge(from, to) {
            return Ok(Word::default());
        }
        let allowed = |v: Symbol| !avoid.contains(&v);
        let dist = self.distances_to(to, allowed);
        let no_path = Error::NoPath {
            from: from as usize,
            to: to as usize,
        };
        let step = |v: Symbol| dist[v as usize].filter(|_| allowed(v) && v != to);
        let mut remaining = self.successors(from).filter_map(step).min().ok_or(no_path)?;
        let mut interior = Vec::with_capacity(remaining + 1);
        let mut cur = from;
        while remaining > 0 {
            let next = self
                .successors(cur)
                .find(|&u| step(u) == Some(remaining))
                .expect("a successor one step closer exists");
            interior.push(next);
            cur = next;
            remaining -= 1;
        }
        debug_assert!(self.edge(cur, to));
        Ok(Word(interior))
    }

    /// Interior `θ₁ … θ_{n-1}` of an admissible path of exactly `n` edges from
    /// `from` to `to`. Paths whose interior avoids `from` are preferred; ties
    /// are broken lexicographically.
    pub fn path_of_length(&self, from: Symbol, to: Symbol, n: usize) -> Result<Word> {
        self.check_symbol(from)?;
        self.check_symbol(to)?;
        let err = Error::NoPathOfLength {
            from: from as usize,
            to: to as usize,
            n,
        };
        if n == 0 {
            return if from == to { Ok(Word::default()) } else { Err(err) };
        }
        self.path_of_length_avoiding(from, to, n, Some(from))
            .or_else(|| self.path_of_length_avoiding(from, to, n, None))
            .ok_or(err)
    }

    fn path_of_length_avoiding(
        &self,
        from: Symbol,
        to: Symbol,
        n: usize,
        avoid: Option<Symbol>,
    ) -> Option<Word> {
        let d = self.d;
        // reach[k][v]: v can reach `to` in exactly k edges through allowed interior symbols.
        let mut reach = vec![vec![false; d]; n];
        reach[0][to as usize] = true;
        for k in 1..n {
            for v in 0..d {
                if Some(v as Symbol) == avoid {
                    continue;
                }
                reach[k][v] = (0..d).any(|u| self.adj[v * d + u] && reach[k - 1][u]);
            }
        }
        let mut interior = Vec::with_capacity(n.saturating_sub(1));
        let mut cur = from;
        for k in (0..n).rev() {
            let next = self.successors(cur).find(|&u| reach[k][u as usize])?;
            if k > 0 {
                interior.push(next);
            }
            cur = next;
        }
        Some(Word(interior))
    }

    /// Smallest `n₀` such that `a` returns to itself in exactly `j` steps for
    /// every `j >= n₀`. Requires an aperiodic shift; beyond the Wielandt
    /// bound every return length is realised.
    pub fn return_threshold(&self, a: Symbol) -> Result<usize> {
        self.check_symbol(a)?;
        let d = self.d;
        let horizon = wielandt_bound(d);
        let mut frontier = vec![false; d];
        frontier[a as usize] = true;
        let mut returns = Vec::with_capacity(horizon);
        for _ in 0..horizon {
            let mut next = vec![false; d];
            for (u, _) in frontier.iter().enumerate().filter(|(_, &f)| f) {
                for v in 0..d {
                    next[v] |= self.adj[u * d + v];
                }
            }
            returns.push(next[a as usize]);
            frontier = next;
        }
        let mut n0 = horizon;
        while n0 > 1 && returns[n0 - 2] {
            n0 -= 1;
        }
        if !returns[horizon - 1] {
            return Err(Error::NotMixing);
        }
        Ok(n0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn build_rejects_bad_matrices() {
        assert_eq!(
            Sft::new(2, &[vec![1, 1], vec![0, 0]]),
            Err(Error::StrandedSymbol(1))
        );
        assert_eq!(
            Sft::new(2, &[vec![1, 0], vec![1, 0]]),
            Err(Error::StrandedSymbol(1))
        );
        assert!(matches!(
            Sft::new(2, &[vec![1, 1], vec![1, 1], vec![1, 1]]),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        ));
        assert!(matches!(
            Sft::new(2, &[vec![1, 2], vec![1, 1]]),
            Err(Error::InvalidEntry { row: 0, col: 1, value: 2 })
        ));
        assert_eq!(Sft::new(1, &[vec![1]]), Err(Error::AlphabetSize(1)));
    }

    #[test]
    fn aperiodicity_examples() {
        assert!(Sft::full(2).unwrap().is_aperiodic());
        assert!(Sft::golden_mean().is_aperiodic());
        let flip = Sft::new(2, &[vec![0, 1], vec![1, 0]]).unwrap();
        assert!(!flip.is_aperiodic());
    }

    #[test]
    fn admissibility() {
        let gm = Sft::golden_mean();
        assert!(gm.is_admissible(&w("010")).unwrap());
        assert!(!gm.is_admissible(&w("011")).unwrap());
        assert!(gm.is_admissible(&w("0")).unwrap());
        assert!(matches!(
            gm.is_admissible(&[0, 2]),
            Err(Error::SymbolOutOfRange { symbol: 2, d: 2 })
        ));
    }

    #[test]
    fn word_enumeration() {
        let gm = Sft::golden_mean();
        assert_eq!(gm.words(2).unwrap(), vec![w("00"), w("01"), w("10")]);
        assert_eq!(gm.words(3).unwrap().len(), 5);
        assert_eq!(Sft::full(2).unwrap().words(3).unwrap().len(), 8);
        assert!(matches!(gm.words(21), Err(Error::CapExceeded { n: 21, cap: 20 })));
        assert_eq!(gm.words_with_cap(21, 21).unwrap().len() as u128, gm.count_words(21));
    }

    #[test]
    fn separation() {
        assert_eq!(
            separation_index(&w("0000"), &w("0100")).unwrap(),
            SeparationIndex::At(1)
        );
        assert_eq!(
            separation_index(&w("0101"), &w("0101")).unwrap(),
            SeparationIndex::Identical
        );
        assert_eq!(
            separation_index(&w("1000"), &w("0000")).unwrap(),
            SeparationIndex::At(0)
        );
        assert_eq!(
            separation_index(&w("10"), &w("100")),
            Err(Error::LengthMismatch(2, 3))
        );
        assert_eq!(SeparationIndex::Identical.distance(), 0.0);
        assert_eq!(SeparationIndex::At(0).distance(), 1.0);
    }

    #[test]
    fn minimal_cycles() {
        assert_eq!(Sft::golden_mean().minimal_cycle().unwrap(), w("0"));
        assert_eq!(Sft::full(2).unwrap().minimal_cycle().unwrap(), w("0"));
        // edges 01, 12, 20, 10
        let s = Sft::new(3, &[vec![0, 1, 0], vec![1, 0, 1], vec![1, 0, 0]]).unwrap();
        assert_eq!(s.minimal_cycle().unwrap(), w("01"));
        assert_eq!(s.minimal_cycles().unwrap(), vec![w("01"), w("10")]);
    }

    #[test]
    fn shortest_paths() {
        let gm = Sft::golden_mean();
        assert_eq!(gm.shortest_path(0, 1, &[]).unwrap(), Word::default());
        assert_eq!(gm.shortest_path(1, 1, &[]).unwrap(), w("0"));
        assert_eq!(
            Sft::full(2).unwrap().shortest_path(0, 1, &[]).unwrap(),
            Word::default()
        );
        assert!(matches!(
            gm.shortest_path(1, 1, &[0]),
            Err(Error::NoPath { from: 1, to: 1 })
        ));
        // the target never appears in the interior even when listed as avoided
        let s = Sft::new(3, &[vec![0, 1, 0], vec![1, 0, 1], vec![1, 0, 0]]).unwrap();
        assert_eq!(s.shortest_path(0, 2, &[2]).unwrap(), w("1"));
    }

    #[test]
    fn paths_of_length() {
        let gm = Sft::golden_mean();
        assert_eq!(gm.path_of_length(1, 1, 3).unwrap(), w("00"));
        assert_eq!(Sft::full(2).unwrap().path_of_length(1, 1, 2).unwrap(), w("0"));
        assert!(matches!(
            gm.path_of_length(1, 1, 1),
            Err(Error::NoPathOfLength { from: 1, to: 1, n: 1 })
        ));
        // FULL2, 0 -> 0 in two steps: interior must avoid 0, so the path is 0,1,0
        assert_eq!(Sft::full(2).unwrap().path_of_length(0, 0, 2).unwrap(), w("1"));
    }

    #[test]
    fn path_of_length_falls_back_when_from_is_unavoidable() {
        // GM, 0 -> 0 in three steps: avoiding 0 in the interior would need 11.
        let s = Sft::golden_mean();
        let interior = s.path_of_length(0, 0, 3).unwrap();
        assert_eq!(interior, w("00"));
        let mut path = vec![0];
        path.extend_from_slice(&interior);
        path.push(0);
        assert!(s.is_admissible(&path).unwrap());
    }

    #[test]
    fn return_thresholds() {
        assert_eq!(Sft::full(2).unwrap().return_threshold(1).unwrap(), 1);
        let gm = Sft::golden_mean();
        assert_eq!(gm.return_threshold(1).unwrap(), 2);
        assert_eq!(gm.return_threshold(0).unwrap(), 1);
    }

    #[test]
    fn word_display_and_parse() {
        assert_eq!(w("10010").to_string(), "10010");
        assert_eq!(Word::new(vec![1, 12]).to_string(), "[1,12]");
        assert!(Word::parse("1a").is_err());
    }
}
