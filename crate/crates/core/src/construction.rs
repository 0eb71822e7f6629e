//! Construction of the separating words and of the measures `μ_q`.
//!
//! Starting from a minimal cycle `β₁ … β_κ` and a symbol `α` off the cycle
//! with `α → β₁`, the construction produces
//!
//! ```text
//! w = α (β₁…β_κ)^p
//! s = (β₁…β_κ)^e γ          ξ = w s w
//! t = γ α θ₁ … θ_{n−1}      η = w t w
//! ```
//!
//! where `γ` is a shortest path `β_κ → α` and `α θ₁ … θ_{n−1} α` is a loop of
//! length `n = κe`. `s` never contains `α` while `t` contains `αθ₁`, so the
//! equilibrium state `μ_q` of the potential `q·1[x₀x₁ = αθ₁]` gives `η`
//! strictly more mass than `ξ` for every `q > 0`.
//!
//! Each `q ↦ μ_q` is cached. The gap function `f(q) = |μ_q([ξ]) − m([ξ])|`
//! (or `g` for `η`) is inverted on sequences `ε_k = a/m` built from pairwise
//! rationally independent generators `a`, which yields disjoint parameter
//! families.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::measures::{equilibrium_state, parry_cylinder_closed_form, EquilibriumData, TwoBlockPotential};
use crate::rng::SymbolRng;
use crate::sft::{Sft, Symbol, Word};
use crate::spectral::{dominant_eigendata, SpectralData};
use crate::substitution::find_occurrences;

/// How many extra `w` repetitions are tried before giving up.
const MAX_P_RETRIES: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WordSystem {
    pub alpha: Symbol,
    pub beta: Word,
    pub gamma: Word,
    pub theta: Word,
    pub n0: usize,
    pub e: usize,
    /// Loop length `κe`.
    pub n: usize,
    pub p: usize,
    pub w: Word,
    pub s: Word,
    pub t: Word,
    pub xi: Word,
    pub eta: Word,
    #[serde(rename = "M")]
    pub m: usize,
}

impl WordSystem {
    /// Assembles `w, s, t, ξ, η` from the construction parameters.
    pub fn assemble(alpha: Symbol, beta: Word, gamma: Word, theta: Word, n0: usize, e: usize, p: usize) -> Self {
        let cycle_p = beta.repeat(p);
        let w = Word::concat(&[&[alpha], &cycle_p]);
        let s = Word::concat(&[&beta.repeat(e), &gamma]);
        let t = Word::concat(&[&gamma, &[alpha], &theta]);
        let xi = Word::concat(&[&w, &s, &w]);
        let eta = Word::concat(&[&w, &t, &w]);
        WordSystem {
            alpha,
            n: beta.len() * e,
            m: xi.len(),
            beta,
            gamma,
            theta,
            n0,
            e,
            p,
            w,
            s,
            t,
            xi,
            eta,
        }
    }

    pub fn kappa(&self) -> usize {
        self.beta.len()
    }

    pub fn ell(&self) -> usize {
        self.gamma.len()
    }

    /// The 2-word `αθ₁` carrying the potential.
    pub fn marked_pair(&self) -> (Symbol, Symbol) {
        (self.alpha, self.theta.first().copied().unwrap_or(self.alpha))
    }
}

/// Number of positions `i` with `word[i] word[i+1] = pair`.
pub fn transition_count(word: &[Symbol], pair: (Symbol, Symbol)) -> usize {
    word.windows(2).filter(|p| (p[0], p[1]) == pair).count()
}

/// Minimal cycles grouped by cycle, each listed by its rotations, cycles
/// ordered by their lexicographically least rotation.
fn cycles_with_rotations(sft: &Sft) -> Result<Vec<Vec<Word>>> {
    let all = sft.minimal_cycles()?;
    let mut groups: Vec<Vec<Word>> = Vec::new();
    for c in all {
        let canonical = (0..c.len())
            .map(|r| Word::concat(&[&c[r..], &c[..r]]))
            .min()
            .expect("non-empty cycle");
        if groups.iter().any(|g| g[0] == canonical) {
            continue;
        }
        let rotations = (0..canonical.len())
            .map(|r| Word::concat(&[&canonical[r..], &canonical[..r]]))
            .collect();
        groups.push(rotations);
    }
    groups.sort();
    Ok(groups)
}

pub fn build_word_system(sft: &Sft) -> Result<WordSystem> {
    if !sft.is_aperiodic() {
        return Err(Error::NotMixing);
    }
    let (alpha, beta) = cycles_with_rotations(sft)?
        .into_iter()
        .flatten()
        .find_map(|rot| {
            (0..sft.d() as Symbol)
                .find(|&a| !rot.contains(&a) && sft.edge(a, rot[0]))
                .map(|a| (a, rot))
        })
        .ok_or_else(|| {
            Error::ConstructionFailed("no symbol off a minimal cycle leads into it".into())
        })?;
    let kappa = beta.len();
    let gamma = sft.shortest_path(beta[kappa - 1], alpha, &[])?;
    let n0 = sft.return_threshold(alpha)?;
    let e = n0 / kappa + 1;
    let theta = sft.path_of_length(alpha, alpha, kappa * e)?;
    let middle = kappa * e + gamma.len();
    let p_min = middle.div_ceil(kappa);

    let mut last_failures = Vec::new();
    for p in p_min..p_min + MAX_P_RETRIES {
        let ws = WordSystem::assemble(alpha, beta.clone(), gamma.clone(), theta.clone(), n0, e, p);
        let report = validate_word_system(&ws, sft);
        if report.passed() {
            return Ok(ws);
        }
        last_failures = report.failures().map(|c| c.name.clone()).collect();
    }
    Err(Error::ConstructionFailed(format!(
        "word system checks keep failing: {}",
        last_failures.join(", ")
    )))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Non-empty proper prefixes of `w` that are also suffixes.
pub fn border_lengths(w: &[Symbol]) -> Vec<usize> {
    (1..w.len()).filter(|&k| w[..k] == w[w.len() - k..]).collect()
}

/// Shifts `0 < δ < limit` at which `second` placed `δ` symbols after `first`
/// agrees with it on their overlap.
fn consistent_shifts(first: &[Symbol], second: &[Symbol], limit: usize) -> Vec<usize> {
    (1..limit.min(first.len()))
        .filter(|&delta| {
            let overlap = (first.len() - delta).min(second.len());
            first[delta..delta + overlap] == second[..overlap]
        })
        .collect()
}

/// Checks every structural invariant of a word system. Never fails; the
/// report lists each check with its outcome.
pub fn validate_word_system(ws: &WordSystem, sft: &Sft) -> ValidationReport {
    let mut checks = Vec::new();
    let kappa = ws.kappa();
    let ell = ws.ell();
    let middle = kappa * ws.e + ell;

    checks.push(Check::new(
        "middle_lengths",
        ws.s.len() == middle && ws.t.len() == middle,
        format!("|s| = {}, |t| = {}, κe + ℓ = {middle}", ws.s.len(), ws.t.len()),
    ));
    checks.push(Check::new(
        "outer_length",
        ws.w.len() == kappa * ws.p + 1 && ws.w.len() > ws.s.len(),
        format!("|w| = {}, κp + 1 = {}, |s| = {}", ws.w.len(), kappa * ws.p + 1, ws.s.len()),
    ));
    let composed = ws.xi == Word::concat(&[&ws.w, &ws.s, &ws.w])
        && ws.eta == Word::concat(&[&ws.w, &ws.t, &ws.w]);
    checks.push(Check::new("composition", composed, "ξ = wsw and η = wtw"));
    checks.push(Check::new(
        "word_length",
        ws.m == ws.xi.len() && ws.m == 2 * ws.w.len() + ws.s.len() && ws.eta.len() == ws.m,
        format!("M = {}, |ξ| = {}, |η| = {}", ws.m, ws.xi.len(), ws.eta.len()),
    ));
    let admissible = |x: &[Symbol]| sft.is_admissible(x).unwrap_or(false);
    checks.push(Check::new(
        "admissible",
        admissible(&ws.xi) && admissible(&ws.eta),
        format!("ξ = {}, η = {}", ws.xi, ws.eta),
    ));
    checks.push(Check::new("distinct", ws.xi != ws.eta, ""));
    checks.push(Check::new(
        "s_avoids_alpha",
        !ws.s.contains(&ws.alpha),
        format!("s = {}", ws.s),
    ));
    let pair = ws.marked_pair();
    checks.push(Check::new(
        "t_contains_marked_pair",
        transition_count(&ws.t, pair) >= 1,
        format!("t = {}, pair = ({}, {})", ws.t, pair.0, pair.1),
    ));
    let borders = border_lengths(&ws.w);
    checks.push(Check::new(
        "w_prefix_suffix_disjoint",
        borders.is_empty(),
        format!("w = {}, shared prefix/suffix lengths {borders:?}", ws.w),
    ));
    checks.push(Check::new(
        "loop_exceeds_threshold",
        ws.n == kappa * ws.e && ws.n > ws.n0,
        format!("n = {}, n0 = {}", ws.n, ws.n0),
    ));

    // Two occurrences at distance δ exist in some admissible word iff the
    // words agree on their overlap at shift δ.
    let min_gap = ws.w.len() + ws.s.len();
    let words = [&ws.xi, &ws.eta];
    let mut bad = Vec::new();
    for (i, a) in words.iter().enumerate() {
        for (j, b) in words.iter().enumerate() {
            for delta in consistent_shifts(a, b, min_gap) {
                bad.push(format!("{}→{} at shift {delta}", ["ξ", "η"][i], ["ξ", "η"][j]));
            }
        }
    }
    checks.push(Check::new("overlap_shifts", bad.is_empty(), bad.join("; ")));

    let sampled = sampled_overlap_violations(ws, sft, min_gap);
    checks.push(Check::new(
        "overlap_sampled",
        sampled.is_empty(),
        sampled.join("; "),
    ));

    ValidationReport { checks }
}

/// Scans random admissible words of length `3M` that begin with `ξ` or `η`
/// for pairs of occurrences closer than `min_gap`.
fn sampled_overlap_violations(ws: &WordSystem, sft: &Sft, min_gap: usize) -> Vec<String> {
    let mut rng = SymbolRng::new(0x5eed_0f_0e1a);
    let mut bad = Vec::new();
    if ws.xi.is_empty() || !sft.is_admissible(&ws.xi).unwrap_or(false) || !sft.is_admissible(&ws.eta).unwrap_or(false) {
        return bad;
    }
    for sample in 0..256 {
        let start = if sample % 2 == 0 { &ws.xi } else { &ws.eta };
        let mut x = start.to_vec();
        while x.len() < 3 * ws.m {
            let last = *x.last().expect("non-empty");
            let succ: Vec<Symbol> = sft.successors(last).collect();
            x.push(succ[(rng.next_u64() % succ.len() as u64) as usize]);
        }
        let mut starts: Vec<usize> = find_occurrences(&x, &ws.xi);
        starts.extend(find_occurrences(&x, &ws.eta));
        starts.sort_unstable();
        for pair in starts.windows(2) {
            if pair[1] - pair[0] < min_gap {
                bad.push(format!("sample {sample}: occurrences at {} and {}", pair[0], pair[1]));
            }
        }
    }
    bad
}

/// Which gap function is inverted when building parameter families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GapBranch {
    /// `f(q) = |μ_q([ξ]) − m([ξ])|`
    Xi,
    /// `g(q) = |μ_q([η]) − m([η])|`
    Eta,
}

/// `f` and `g` sampled on the scan grid.
#[derive(Clone, Debug, Serialize)]
pub struct GapScan {
    /// `0` followed by a geometric grid over `(0, 1]`.
    pub grid: Vec<f64>,
    pub f: Vec<f64>,
    pub g: Vec<f64>,
    pub branch: GapBranch,
}

/// Number of geometric grid points over `(0, 1]`.
pub const SCAN_POINTS: usize = 256;
/// Smallest positive grid point.
pub const SCAN_MIN_Q: f64 = 1e-10;

impl GapScan {
    pub fn values(&self) -> &[f64] {
        match self.branch {
            GapBranch::Xi => &self.f,
            GapBranch::Eta => &self.g,
        }
    }

    pub fn max(&self) -> f64 {
        self.values().iter().copied().fold(0.0, f64::max)
    }
}

/// The measures `μ_q` attached to a word system, with the Parry data.
pub struct PotentialFamily {
    sft: Sft,
    words: WordSystem,
    pair: (Symbol, Symbol),
    parry: SpectralData,
    tol: f64,
    cache: RwLock<HashMap<u64, Arc<EquilibriumData>>>,
    scan: OnceLock<GapScan>,
}

impl std::fmt::Debug for PotentialFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PotentialFamily")
            .field("sft", &self.sft)
            .field("pair", &self.pair)
            .field("tol", &self.tol)
            .finish_non_exhaustive()
    }
}

impl PotentialFamily {
    /// `tol` is the eigensolver tolerance used for every `μ_q`.
    pub fn new(sft: &Sft, words: WordSystem, tol: f64) -> Result<Self> {
        let parry = dominant_eigendata(&SquareMatrix::new(sft.d(), sft.matrix_f64())?, tol)?;
        Ok(PotentialFamily {
            pair: words.marked_pair(),
            sft: sft.clone(),
            words,
            parry,
            tol,
            cache: RwLock::new(HashMap::new()),
            scan: OnceLock::new(),
        })
    }

    /// Builds the word system for `sft` and wraps it.
    pub fn for_sft(sft: &Sft, tol: f64) -> Result<Self> {
        Self::new(sft, build_word_system(sft)?, tol)
    }

    pub fn sft(&self) -> &Sft {
        &self.sft
    }

    pub fn words(&self) -> &WordSystem {
        &self.words
    }

    pub fn pair(&self) -> (Symbol, Symbol) {
        self.pair
    }

    pub fn parry_spectral(&self) -> &SpectralData {
        &self.parry
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn potential(&self, q: f64) -> Result<TwoBlockPotential> {
        TwoBlockPotential::from_pairs(&self.sft, &[(self.pair, q)])
    }

    /// Equilibrium state of `q·φ`; `q = 0` gives the Parry measure.
    pub fn mu_q(&self, q: f64) -> Result<Arc<EquilibriumData>> {
        if !(q >= 0.0) || !q.is_finite() {
            return Err(Error::InvalidParameter(format!("q must be finite and >= 0, got {q}")));
        }
        let key = q.to_bits();
        if let Some(hit) = self.cache.read().expect("cache lock").get(&key) {
            return Ok(Arc::clone(hit));
        }
        let eq = Arc::new(equilibrium_state(&self.sft, &self.potential(q)?, self.tol)?);
        let mut cache = self.cache.write().expect("cache lock");
        Ok(Arc::clone(cache.entry(key).or_insert(eq)))
    }

    /// `(c_ξ, c_η)`: occurrences of the marked pair in `ξ` and `η`.
    pub fn transition_counts(&self) -> (usize, usize) {
        (
            transition_count(&self.words.xi, self.pair),
            transition_count(&self.words.eta, self.pair),
        )
    }

    /// `(μ_q([ξ]), μ_q([η]))`, requiring the strict inequality.
    pub fn xi_eta_measures(&self, q: f64) -> Result<(f64, f64)> {
        if !(q > 0.0) {
            return Err(Error::InvalidParameter(format!("q must be > 0, got {q}")));
        }
        let (xi, eta) = self.xi_eta_unchecked(q)?;
        if xi < eta {
            Ok((xi, eta))
        } else {
            Err(Error::GapViolation { q, xi, eta })
        }
    }

    fn xi_eta_unchecked(&self, q: f64) -> Result<(f64, f64)> {
        let eq = self.mu_q(q)?;
        Ok((eq.cylinder_measure(&self.words.xi)?, eq.cylinder_measure(&self.words.eta)?))
    }

    /// Parry masses `(m([ξ]), m([η]))` from the closed form.
    pub fn parry_xi_eta(&self) -> Result<(f64, f64)> {
        Ok((
            parry_cylinder_closed_form(&self.sft, &self.parry, &self.words.xi)?,
            parry_cylinder_closed_form(&self.sft, &self.parry, &self.words.eta)?,
        ))
    }

    /// `(f(q), g(q))` for `q ∈ [0, 1]`, with `f(0) = g(0) = 0`.
    pub fn gap_functions(&self, q: f64) -> Result<(f64, f64)> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::InvalidParameter(format!("q must lie in [0, 1], got {q}")));
        }
        if q == 0.0 {
            return Ok((0.0, 0.0));
        }
        let (xi, eta) = self.xi_eta_unchecked(q)?;
        let (m_xi, m_eta) = self.parry_xi_eta()?;
        Ok(((xi - m_xi).abs(), (eta - m_eta).abs()))
    }

    pub fn gap(&self, branch: GapBranch, q: f64) -> Result<f64> {
        let (f, g) = self.gap_functions(q)?;
        Ok(match branch {
            GapBranch::Xi => f,
            GapBranch::Eta => g,
        })
    }

    /// Scan of `f` and `g`, computed once. `f` is used unless it vanishes on
    /// the lowest quarter of the grid, in which case `g` takes over.
    pub fn scan(&self) -> Result<&GapScan> {
        if let Some(s) = self.scan.get() {
            return Ok(s);
        }
        let mut grid = vec![0.0];
        let span = -SCAN_MIN_Q.log10();
        grid.extend((0..SCAN_POINTS).map(|i| {
            if i + 1 == SCAN_POINTS {
                1.0
            } else {
                10f64.powf(-span + span * i as f64 / (SCAN_POINTS - 1) as f64)
            }
        }));
        let mut f = Vec::with_capacity(grid.len());
        let mut g = Vec::with_capacity(grid.len());
        for &q in &grid {
            let (fq, gq) = self.gap_functions(q)?;
            f.push(fq);
            g.push(gq);
        }
        let low = 1..=SCAN_POINTS / 4;
        let branch = if f[low.clone()].iter().any(|&v| v > 0.0) {
            GapBranch::Xi
        } else if g[low].iter().any(|&v| v > 0.0) {
            GapBranch::Eta
        } else {
            return Err(Error::ConstructionFailed(
                "both gap functions vanish near q = 0".into(),
            ));
        };
        Ok(self.scan.get_or_init(|| GapScan { grid, f, g, branch }))
    }

    /// Smallest `q` (leftmost bracket on the scan grid, refined by bisection)
    /// with `|gap(q) − eps| <= tol`, using the branch chosen by the scan.
    pub fn solve_epsilon(&self, eps: f64, tol: f64) -> Result<f64> {
        let scan = self.scan()?;
        let max = scan.max();
        if !(eps > 0.0) || eps > max {
            return Err(Error::EpsilonOutOfRange { eps, max });
        }
        let values = scan.values();
        let i = values
            .iter()
            .position(|&v| v >= eps)
            .ok_or(Error::EpsilonOutOfRange { eps, max })?;
        let (mut lo, mut hi) = (scan.grid[i - 1], scan.grid[i]);
        if (values[i] - eps).abs() <= tol {
            return Ok(hi);
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let v = self.gap(scan.branch, mid)?;
            if (v - eps).abs() <= tol {
                return Ok(mid);
            }
            if v < eps {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Err(Error::SolverFailed(eps))
    }

    /// The Birkhoff target of the scanned branch: `μ_q([ξ])` or `μ_q([η])`.
    pub fn target(&self, q: f64) -> Result<f64> {
        let (xi, eta) = self.xi_eta_unchecked(q)?;
        Ok(match self.scan()?.branch {
            GapBranch::Xi => xi,
            GapBranch::Eta => eta,
        })
    }
}

/// A real of the form `coefficient · √radicand` with a square-free radicand.
/// Two such numbers are rationally dependent iff their radicands agree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub coefficient: u64,
    pub radicand: u64,
}

impl Generator {
    pub fn new(coefficient: u64, radicand: u64) -> Result<Self> {
        if coefficient == 0 || radicand == 0 {
            return Err(Error::InvalidParameter("generator must be positive".into()));
        }
        if (2..).take_while(|k| k * k <= radicand).any(|k| radicand % (k * k) == 0) {
            return Err(Error::InvalidParameter(format!("{radicand} is not square-free")));
        }
        Ok(Generator { coefficient, radicand })
    }

    pub fn sqrt_of(radicand: u64) -> Result<Self> {
        Self::new(1, radicand)
    }

    pub fn value(&self) -> f64 {
        self.coefficient as f64 * (self.radicand as f64).sqrt()
    }

    /// Exact test of `self / m == other / m_other`.
    pub fn same_ratio(&self, m: u64, other: &Generator, m_other: u64) -> bool {
        self.radicand == other.radicand
            && self.coefficient as u128 * m_other as u128 == other.coefficient as u128 * m as u128
    }
}

/// The first `k` primes.
pub fn first_primes(k: usize) -> Vec<u64> {
    let mut primes = Vec::with_capacity(k);
    let mut c = 2u64;
    while primes.len() < k {
        if primes.iter().take_while(|&&p| p * p <= c).all(|&p| c % p != 0) {
            primes.push(c);
        }
        c += 1;
    }
    primes
}

/// `(m₀, [a/m₀, a/(m₀+1), …])` with `m₀` the least positive integer such
/// that `a/m₀ <= max`.
pub fn epsilon_sequence(a: f64, max: f64, count: usize) -> Result<(u64, Vec<f64>)> {
    if !(a > 0.0) || !(max > 0.0) {
        return Err(Error::InvalidParameter("generator and bound must be positive".into()));
    }
    let mut m0 = ((a / max).ceil() as u64).max(1);
    while m0 > 1 && a / (m0 - 1) as f64 <= max {
        m0 -= 1;
    }
    while a / m0 as f64 > max {
        m0 += 1;
    }
    Ok((m0, (0..count as u64).map(|k| a / (m0 + k) as f64).collect()))
}

#[derive(Clone, Debug, Serialize)]
pub struct ParameterFamily {
    pub generator: Generator,
    pub a: f64,
    pub m0: u64,
    pub denominators: Vec<u64>,
    pub epsilons: Vec<f64>,
    pub qs: Vec<f64>,
    /// Birkhoff targets `μ_{q_k}` of the scanned word.
    pub targets: Vec<f64>,
    pub branch: GapBranch,
    pub tol: f64,
}

/// Solves `gap(q_k) = a/m` for the first `size` admissible denominators.
pub fn parameter_family(pf: &PotentialFamily, generator: Generator, size: usize, tol: f64) -> Result<ParameterFamily> {
    let scan = pf.scan()?;
    let a = generator.value();
    let (m0, epsilons) = epsilon_sequence(a, scan.max(), size)?;
    let qs = epsilons
        .iter()
        .map(|&eps| pf.solve_epsilon(eps, tol))
        .collect::<Result<Vec<_>>>()?;
    let targets = qs.iter().map(|&q| pf.target(q)).collect::<Result<Vec<_>>>()?;
    Ok(ParameterFamily {
        generator,
        a,
        m0,
        denominators: (m0..m0 + size as u64).collect(),
        epsilons,
        qs,
        targets,
        branch: scan.branch,
        tol,
    })
}

/// Families from the generators `√2, √3, √5, …` (square roots of the first
/// `count` primes), `size` members each.
pub fn independent_family(pf: &PotentialFamily, count: usize, size: usize, tol: f64) -> Result<Vec<ParameterFamily>> {
    if count > 25 || size < 2 {
        return Err(Error::InvalidParameter(format!(
            "need count <= 25 and size >= 2, got count {count}, size {size}"
        )));
    }
    first_primes(count)
        .into_iter()
        .map(|p| parameter_family(pf, Generator::sqrt_of(p)?, size, tol))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Collision {
    /// `(family index, member index)` of both sides.
    pub left: (usize, usize),
    pub right: (usize, usize),
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct DisjointnessReport {
    pub epsilon_collisions: Vec<Collision>,
    pub target_collisions: Vec<Collision>,
    pub members: usize,
}

impl DisjointnessReport {
    pub fn passed(&self) -> bool {
        self.epsilon_collisions.is_empty() && self.target_collisions.is_empty()
    }
}

/// Pairwise comparison of all members of all families: `ε` values exactly
/// through `(generator, denominator)`, targets up to twice the solver
/// tolerance.
pub fn disjointness_check(families: &[ParameterFamily]) -> DisjointnessReport {
    let members: Vec<(usize, usize, &ParameterFamily)> = families
        .iter()
        .enumerate()
        .flat_map(|(fi, f)| (0..f.epsilons.len()).map(move |k| (fi, k, f)))
        .collect();
    let mut report = DisjointnessReport {
        members: members.len(),
        ..Default::default()
    };
    for (x, &(fa, ka, a)) in members.iter().enumerate() {
        for &(fb, kb, b) in &members[x + 1..] {
            let (ma, mb) = (a.denominators[ka], b.denominators[kb]);
            if a.generator.same_ratio(ma, &b.generator, mb) {
                report.epsilon_collisions.push(Collision {
                    left: (fa, ka),
                    right: (fb, kb),
                    detail: format!(
                        "{}√{}/{ma} = {}√{}/{mb}",
                        a.generator.coefficient, a.generator.radicand, b.generator.coefficient, b.generator.radicand
                    ),
                });
            }
            let tol = a.tol.max(b.tol);
            if let (Some(ta), Some(tb)) = (a.targets.get(ka), b.targets.get(kb)) {
                if (ta - tb).abs() <= 2.0 * tol {
                    report.target_collisions.push(Collision {
                        left: (fa, ka),
                        right: (fb, kb),
                        detail: format!("targets {ta:e} and {tb:e}"),
                    });
                }
            }
        }
    }
    report
}
