//! Birkhoff averages along sampled paths and the statistics built on them.
//!
//! Every Monte Carlo quantity here is a pure function of its inputs and seed.
//! Averages over long prefixes use compensated summation and measures of long
//! cylinders are evaluated in log space.

use rayon::prelude::*;
use serde::Serialize;

use crate::construction::PotentialFamily;
use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::measures::{KahanSum, MarkovMeasure};
use crate::sft::Symbol;
use crate::substitution::{factorial, find_occurrences, SubstitutionMap, ZoneTable, MAX_FACTORIAL};

/// Largest checkpoint exponent accepted by [`oscillation_report`].
pub const MAX_CHECKPOINT: usize = 11;

/// `(n, count, count / n)` for one checkpoint.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BirkhoffRow {
    pub n: usize,
    pub count: usize,
    pub average: f64,
}

fn sorted_times(times: &[usize]) -> Result<Vec<usize>> {
    if times.iter().any(|&n| n == 0) {
        return Err(Error::InvalidParameter("checkpoints must be positive".into()));
    }
    let mut t = times.to_vec();
    t.sort_unstable();
    t.dedup();
    Ok(t)
}

/// Counts the occurrences of `pattern` in `x` starting before each `n`.
///
/// Only occurrences lying entirely inside `x` are counted, so checkpoints up
/// to `|x|` are accepted.
pub fn birkhoff_count(x: &[Symbol], pattern: &[Symbol], times: &[usize]) -> Result<Vec<BirkhoffRow>> {
    let times = sorted_times(times)?;
    let Some(&last) = times.last() else {
        return Ok(Vec::new());
    };
    if last > x.len() {
        return Err(Error::PrefixTooShort { len: x.len(), need: last });
    }
    if pattern.is_empty() {
        return Err(Error::InvalidParameter("empty pattern".into()));
    }
    let mut rows = Vec::with_capacity(times.len());
    let mut count = 0;
    let mut next = times.iter().peekable();
    for i in 0..last {
        if i + pattern.len() <= x.len() && x[i..i + pattern.len()] == *pattern {
            count += 1;
        }
        while let Some(&&n) = next.peek() {
            if n != i + 1 {
                break;
            }
            rows.push(BirkhoffRow { n, count, average: count as f64 / n as f64 });
            next.next();
        }
    }
    Ok(rows)
}

/// Cumulative counts of sorted occurrence starts at each sorted checkpoint.
fn counts_before(starts: &[usize], times: &[usize]) -> Vec<usize> {
    times.iter().map(|&n| starts.partition_point(|&s| s < n)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn of(k: usize) -> Self {
        if k % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Odd => "odd",
            Parity::Even => "even",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OscillationRow {
    pub k: usize,
    pub n: usize,
    pub parity: Parity,
    /// Frequency of `ξ` in the prefix of `L(x)`.
    pub avg_phi_l: f64,
    /// Frequency of `η` in the prefix of `x`.
    pub avg_psi_x: f64,
    pub target_xi: f64,
    pub target_eta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OscillationReport {
    pub q: f64,
    pub seed: u64,
    pub prefix_len: usize,
    pub rows: Vec<OscillationRow>,
}

pub const OSCILLATION_CSV_HEADER: &str = "n,k,parity,avg_phi_L,avg_psi_x,target_xi,target_eta";

/// Float formatting used in every CSV output: 17 significant digits.
pub fn csv_float(x: f64) -> String {
    format!("{x:.16e}")
}

impl OscillationReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(OSCILLATION_CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.n,
                r.k,
                r.parity.as_str(),
                csv_float(r.avg_phi_l),
                csv_float(r.avg_psi_x),
                csv_float(r.target_xi),
                csv_float(r.target_eta)
            ));
        }
        out
    }

    pub fn row(&self, k: usize) -> Option<&OscillationRow> {
        self.rows.iter().find(|r| r.k == k)
    }
}

fn checkpoint_range(kmin: usize, kmax: usize) -> Result<Vec<usize>> {
    if kmin == 0 || kmin > kmax {
        return Err(Error::InvalidParameter(format!("need 1 <= kmin <= kmax, got [{kmin}, {kmax}]")));
    }
    if kmax > MAX_CHECKPOINT {
        return Err(Error::CapExceeded { n: kmax, cap: MAX_CHECKPOINT });
    }
    Ok((kmin..=kmax).collect())
}

/// Oscillation rows for a given path `x`, checkpoints `n = k!`.
pub fn oscillation_from_path(
    map: &SubstitutionMap,
    x: &[Symbol],
    kmin: usize,
    kmax: usize,
    targets: (f64, f64),
) -> Result<Vec<OscillationRow>> {
    let ks = checkpoint_range(kmin, kmax)?;
    let times: Vec<usize> = ks.iter().map(|&k| factorial(k) as usize).collect();
    let need = times[times.len() - 1] + map.word_len();
    if x.len() < need {
        return Err(Error::PrefixTooShort { len: x.len(), need });
    }
    let lx = map.apply_l(x);
    let phi = counts_before(&find_occurrences(&lx, map.xi()), &times);
    let psi = counts_before(&find_occurrences(x, map.eta()), &times);
    Ok(ks
        .iter()
        .zip(&times)
        .enumerate()
        .map(|(i, (&k, &n))| OscillationRow {
            k,
            n,
            parity: Parity::of(k),
            avg_phi_l: phi[i] as f64 / n as f64,
            avg_psi_x: psi[i] as f64 / n as f64,
            target_xi: targets.0,
            target_eta: targets.1,
        })
        .collect())
}

/// Samples `x ~ μ_q` of length `kmax! + M` and reports the averages at
/// `n = k!` for `kmin <= k <= kmax`.
pub fn oscillation_report(pf: &PotentialFamily, q: f64, seed: u64, kmin: usize, kmax: usize) -> Result<OscillationReport> {
    checkpoint_range(kmin, kmax)?;
    let map = SubstitutionMap::from_word_system(pf.words())?;
    let targets = pf.xi_eta_measures(q)?;
    let prefix_len = factorial(kmax) as usize + map.word_len();
    let x = pf.mu_q(q)?.measure.sample_path(prefix_len, seed);
    let rows = oscillation_from_path(&map, &x, kmin, kmax, targets)?;
    Ok(OscillationReport { q, seed, prefix_len, rows })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SllnRow {
    pub n: usize,
    pub estimate: f64,
    pub target: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SllnReport {
    pub m: usize,
    pub rows: Vec<SllnRow>,
}

pub const SLLN_CSV_HEADER: &str = "n,m,estimate,target";

impl SllnReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(SLLN_CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!("{},{},{},{}\n", r.n, self.m, csv_float(r.estimate), csv_float(r.target)));
        }
        out
    }
}

/// Prefix log-masses `log μ(C_j(y))` for the sorted lengths `lens`, in one pass.
fn log_prefix_measures(mu: &MarkovMeasure, y: &[Symbol], lens: &[usize]) -> Result<Vec<f64>> {
    mu.sft().check_symbols(y)?;
    let mut out = Vec::with_capacity(lens.len());
    let Some(&first) = y.first() else {
        return Ok(vec![0.0; lens.len()]);
    };
    let mut acc = KahanSum::new(mu.stationary()[first as usize].ln());
    let mut j = 1;
    for &len in lens {
        while j < len {
            acc.add(-mu.neg_log_transition(y[j - 1], y[j]));
            j += 1;
        }
        let v = if len == 0 { 0.0 } else { acc.value() };
        if !v.is_finite() {
            return Err(Error::ZeroMeasure);
        }
        out.push(v);
    }
    Ok(out)
}

/// `−(1/n) log μ(C_{n+m}(y))` at each `n`, against the entropy of `mu`.
pub fn slln_from_path(mu: &MarkovMeasure, y: &[Symbol], m: usize, times: &[usize]) -> Result<SllnReport> {
    let times = sorted_times(times)?;
    if let Some(&last) = times.last() {
        if last + m > y.len() {
            return Err(Error::PrefixTooShort { len: y.len(), need: last + m });
        }
    }
    let lens: Vec<usize> = times.iter().map(|n| n + m).collect();
    let logs = log_prefix_measures(mu, y, &lens)?;
    let target = mu.entropy();
    Ok(SllnReport {
        m,
        rows: times
            .iter()
            .zip(logs)
            .map(|(&n, l)| SllnRow { n, estimate: -l / n as f64, target })
            .collect(),
    })
}

/// Samples `x ~ μ_q` of length `max(times) + m + M` and evaluates the
/// estimator on `L(x)`.
pub fn slln_estimate(pf: &PotentialFamily, q: f64, seed: u64, m: usize, times: &[usize]) -> Result<SllnReport> {
    let last = sorted_times(times)?.last().copied().unwrap_or(0);
    let map = SubstitutionMap::from_word_system(pf.words())?;
    let eq = pf.mu_q(q)?;
    let x = eq.measure.sample_path(last + m + map.word_len(), seed);
    slln_from_path(&eq.measure, &map.apply_l(&x), m, times)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SplitSums {
    pub n: usize,
    /// Indices `i < n` inside some frozen range `[(2k)!, (2k+1)!]`.
    pub frozen_len: usize,
    pub other_len: usize,
    /// Average of `−log Q(x_i, x_{i+1})` over the frozen indices.
    pub frozen_avg: Option<f64>,
    pub other_avg: Option<f64>,
}

/// Number of indices `i < n` lying in a frozen range.
pub fn frozen_count(n: usize) -> usize {
    ZoneTable::new(1)
        .frozen_ranges()
        .iter()
        .map(|r| {
            let hi = (r.end + 1).min(n as u64);
            hi.saturating_sub(r.start) as usize
        })
        .sum()
}

/// Splits `{0, …, n−1}` into frozen indices and the rest and averages
/// `ρ(σ^i x) = −log Q(x_i, x_{i+1})` over both parts.
pub fn split_zone_averages(x: &[Symbol], transition: &SquareMatrix, n: usize) -> Result<SplitSums> {
    if n + 1 > x.len() {
        return Err(Error::PrefixTooShort { len: x.len(), need: n + 1 });
    }
    let d = transition.dim();
    if let Some(&s) = x[..=n].iter().find(|&&s| s as usize >= d) {
        return Err(Error::SymbolOutOfRange { symbol: s as usize, d });
    }
    let table = ZoneTable::new(1);
    // Sums are kept relative to the first term so constant summands average
    // to exactly that constant.
    let pivot = if n > 0 { -transition.get(x[0] as usize, x[1] as usize).ln() } else { 0.0 };
    let mut frozen = (KahanSum::new(0.0), 0usize);
    let mut other = (KahanSum::new(0.0), 0usize);
    // Walk the frozen ranges in order instead of testing every index.
    let mut ranges = table.frozen_ranges().iter().peekable();
    for i in 0..n {
        while ranges.peek().is_some_and(|r| r.end < i as u64) {
            ranges.next();
        }
        let rho = -transition.get(x[i] as usize, x[i + 1] as usize).ln();
        let part = if ranges.peek().is_some_and(|r| r.contains(i as u64)) {
            &mut frozen
        } else {
            &mut other
        };
        part.0.add(rho - pivot);
        part.1 += 1;
    }
    let avg = |(s, c): (KahanSum, usize)| (c > 0).then(|| pivot + s.value() / c as f64);
    Ok(SplitSums {
        n,
        frozen_len: frozen.1,
        other_len: other.1,
        frozen_avg: avg(frozen),
        other_avg: avg(other),
    })
}

/// `−log μ(C_n(x)) / n`; cylinders are metric balls of radius `e^{−n}`.
pub fn pointwise_dimension(mu: &MarkovMeasure, x: &[Symbol], n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    if n > x.len() {
        return Err(Error::PrefixTooShort { len: x.len(), need: n });
    }
    let l = mu.log_cylinder_measure(&x[..n])?;
    if !l.is_finite() {
        return Err(Error::ZeroMeasure);
    }
    Ok(-l / n as f64)
}

/// `max{m : m! <= n − 1}`, and `0` when `n <= 1`.
pub fn factorial_floor(n: u64) -> usize {
    if n <= 1 {
        return 0;
    }
    (1..=MAX_FACTORIAL).take_while(|&m| factorial(m) <= n - 1).last().unwrap_or(0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftDefectRow {
    pub n: usize,
    pub defect: usize,
    pub bound: usize,
    /// `defect > bound + 1`
    pub violated: bool,
}

/// Compares `ξ` counts in `x` and in `L(σ(L(x)))` below each `n`.
pub fn shift_defect(map: &SubstitutionMap, x: &[Symbol], times: &[usize]) -> Result<Vec<ShiftDefectRow>> {
    let times = sorted_times(times)?;
    let Some(&last) = times.last() else {
        return Ok(Vec::new());
    };
    let need = last + map.word_len() + 1;
    if x.len() < need {
        return Err(Error::PrefixTooShort { len: x.len(), need });
    }
    let lx = map.apply_l(x);
    let back = map.apply_l(&lx[1..]);
    let before = counts_before(&find_occurrences(x, map.xi()), &times);
    let after = counts_before(&find_occurrences(&back, map.xi()), &times);
    Ok(times
        .iter()
        .zip(before.iter().zip(&after))
        .map(|(&n, (&a, &b))| {
            let defect = a.abs_diff(b);
            let bound = factorial_floor(n as u64);
            ShiftDefectRow { n, defect, bound, violated: defect > bound + 1 }
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CorrelationRow {
    pub lag: usize,
    pub covariance: f64,
    /// Standard error of the mean product, treating terms as independent.
    pub std_error: f64,
}

/// Estimates `Cov(ρ, ρ∘σ^lag)` for `ρ(x) = −log P(x₀, x₁)` from one path of
/// `samples` terms; the mean of `ρ` is the entropy of `mu`.
pub fn correlation_decay(mu: &MarkovMeasure, lags: &[usize], samples: usize, seed: u64) -> Result<Vec<CorrelationRow>> {
    if samples < 2 {
        return Err(Error::InvalidParameter("need at least two samples".into()));
    }
    let max_lag = lags.iter().copied().max().unwrap_or(0);
    let x = mu.sample_path(samples + max_lag + 1, seed);
    let rho: Vec<f64> = x.windows(2).map(|p| mu.neg_log_transition(p[0], p[1])).collect();
    let mean = mu.entropy();
    Ok(lags
        .iter()
        .map(|&lag| {
            let mut sum = KahanSum::new(0.0);
            let mut sq = KahanSum::new(0.0);
            for i in 0..samples {
                let p = rho[i] * rho[i + lag];
                sum.add(p);
                sq.add(p * p);
            }
            let n = samples as f64;
            let m = sum.value() / n;
            let var = (sq.value() / n - m * m).max(0.0);
            CorrelationRow {
                lag,
                covariance: m - mean * mean,
                std_error: (var / n).sqrt(),
            }
        })
        .collect())
}

/// Median of a non-empty sample; the mean of the two middle values for even
/// sizes.
pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "median of an empty sample");
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let k = v.len() / 2;
    if v.len() % 2 == 1 {
        v[k]
    } else {
        0.5 * (v[k - 1] + v[k])
    }
}

/// Runs `job` once per seed, possibly in parallel, returning results in
/// ascending seed order.
pub fn per_seed<T, F>(seeds: &[u64], job: F) -> Result<Vec<(u64, T)>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync,
{
    let mut seeds = seeds.to_vec();
    seeds.sort_unstable();
    seeds.par_iter().map(|&s| job(s).map(|t| (s, t))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::build_word_system;
    use crate::measures::parry_measure;
    use crate::sft::{Sft, Word};
    use crate::spectral::{dominant_eigendata, DEFAULT_TOL};
    use approx::assert_relative_eq;

    fn gm_parry() -> MarkovMeasure {
        let gm = Sft::golden_mean();
        let s = dominant_eigendata(&SquareMatrix::new(2, gm.matrix_f64()).unwrap(), DEFAULT_TOL).unwrap();
        parry_measure(&gm, &s).unwrap()
    }

    fn gm_map() -> SubstitutionMap {
        SubstitutionMap::from_word_system(&build_word_system(&Sft::golden_mean()).unwrap()).unwrap()
    }

    #[test]
    fn birkhoff_examples() {
        let xi = Word::parse("10000001000").unwrap();
        let x = xi.repeat(3);
        let rows = birkhoff_count(&x, &xi, &[33]).unwrap();
        assert_eq!(rows, vec![BirkhoffRow { n: 33, count: 3, average: 1.0 / 11.0 }]);
        let zeros = vec![0; 100];
        assert!(birkhoff_count(&zeros, &xi, &[10, 50, 100]).unwrap().iter().all(|r| r.count == 0));
        assert_eq!(
            birkhoff_count(&zeros, &xi, &[101]),
            Err(Error::PrefixTooShort { len: 100, need: 101 })
        );
        let rows = birkhoff_count(&x, &xi, &[33, 1, 12, 11]).unwrap();
        assert_eq!(rows.iter().map(|r| r.count).collect::<Vec<_>>(), vec![1, 1, 2, 3]);
    }

    #[test]
    fn parity_and_csv() {
        assert_eq!(Parity::of(8), Parity::Even);
        assert_eq!(serde_json::to_string(&Parity::Odd).unwrap(), "\"odd\"");
        assert_eq!(csv_float(0.1), "1.0000000000000001e-1");
        assert_eq!(csv_float(0.1).parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn oscillation_without_occurrences() {
        let map = gm_map();
        let x = vec![0; factorial(5) as usize + map.word_len()];
        let rows = oscillation_from_path(&map, &x, 3, 5, (0.1, 0.2)).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.avg_phi_l == 0.0 && r.avg_psi_x == 0.0));
        assert_eq!(rows[2].n, 120);
        assert!(oscillation_from_path(&map, &x, 3, 6, (0.1, 0.2)).is_err());
        assert!(matches!(
            oscillation_from_path(&map, &x, 3, 12, (0.1, 0.2)),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn oscillation_report_is_deterministic() {
        let pf = PotentialFamily::for_sft(&Sft::golden_mean(), DEFAULT_TOL).unwrap();
        let a = oscillation_report(&pf, 1.0, 7, 5, 7).unwrap();
        let b = oscillation_report(&pf, 1.0, 7, 5, 7).unwrap();
        assert_eq!(a, b);
        let (xi, eta) = pf.xi_eta_measures(1.0).unwrap();
        assert_eq!(a.rows[0].target_xi, xi);
        assert_eq!(a.rows[0].target_eta, eta);
        assert_eq!(a.rows.iter().map(|r| r.n).collect::<Vec<_>>(), vec![120, 720, 5040]);
        assert!(a.to_csv().starts_with("n,k,parity,avg_phi_L,avg_psi_x,target_xi,target_eta\n120,5,odd,"));
    }

    #[test]
    fn slln_zero_fixture() {
        let mu = gm_parry();
        let x = vec![0; 100_000];
        let report = slln_from_path(&mu, &x, 0, &[10, 100_000]).unwrap();
        let n = 100_000f64;
        let exact = -(mu.stationary()[0].ln() + (n - 1.0) * mu.transition().get(0, 0).ln()) / n;
        assert_relative_eq!(report.rows[1].estimate, exact, max_relative = 1e-12);
        assert!((report.rows[1].estimate - 0.4812118).abs() < 1e-4);
        let pd = pointwise_dimension(&mu, &x, 100_000).unwrap();
        assert!((pd - report.rows[1].estimate).abs() <= 1e-12);
        assert!(report.to_csv().starts_with("n,m,estimate,target\n10,0,"));
    }

    #[test]
    fn slln_offset_is_small() {
        let pf = PotentialFamily::for_sft(&Sft::golden_mean(), DEFAULT_TOL).unwrap();
        let times = [10_000, 100_000];
        let a = slln_estimate(&pf, 0.5, 3, 0, &times).unwrap();
        let b = slln_estimate(&pf, 0.5, 3, 2, &times).unwrap();
        for (ra, rb) in a.rows.iter().zip(&b.rows) {
            assert!((ra.estimate - rb.estimate).abs() <= 10.0 * 2.0 / ra.n as f64);
        }
    }

    #[test]
    fn split_sums_examples() {
        let mu = gm_parry();
        let x = vec![0; 200];
        let s = split_zone_averages(&x, mu.transition(), 24).unwrap();
        assert_eq!((s.frozen_len, s.other_len), (5, 19));
        let s = split_zone_averages(&x, mu.transition(), 121).unwrap();
        assert_eq!((s.frozen_len, s.other_len), (102, 19));
        let target = -mu.transition().get(0, 0).ln();
        assert_eq!(s.frozen_avg.unwrap(), target);
        assert_eq!(s.other_avg.unwrap(), target);
        assert_eq!(frozen_count(121), 102);
        assert!(split_zone_averages(&x, mu.transition(), 200).is_err());
    }

    #[test]
    fn pointwise_dimension_examples() {
        let full = Sft::full(2).unwrap();
        let bern = MarkovMeasure::bernoulli(&full, &[0.5, 0.5]).unwrap();
        let x = bern.sample_path(1000, 3);
        assert_eq!(pointwise_dimension(&bern, &x, 1000).unwrap(), 2f64.ln());
        let mu = gm_parry();
        assert_eq!(pointwise_dimension(&mu, &[1, 1], 2), Err(Error::ZeroMeasure));
        assert!(pointwise_dimension(&mu, &[0, 1], 3).is_err());
    }

    #[test]
    fn factorial_floor_values() {
        assert_eq!(factorial_floor(1_000_000), 9);
        assert_eq!(factorial_floor(362_881), 9);
        assert_eq!(factorial_floor(362_880), 8);
        assert_eq!(factorial_floor(2), 1);
        assert_eq!(factorial_floor(1), 0);
    }

    #[test]
    fn shift_defect_without_occurrences() {
        let map = gm_map();
        let x = vec![0; 2000];
        let rows = shift_defect(&map, &x, &[100, 1000]).unwrap();
        assert!(rows.iter().all(|r| r.defect == 0 && !r.violated));
        assert!(shift_defect(&map, &x, &[1990]).is_err());
    }

    #[test]
    fn shift_defect_on_samples() {
        let pf = PotentialFamily::for_sft(&Sft::golden_mean(), DEFAULT_TOL).unwrap();
        let map = gm_map();
        let mu = &pf.mu_q(1.0).unwrap().measure;
        for seed in 0..4 {
            let x = mu.sample_path(100_000 + 20, seed);
            for r in shift_defect(&map, &x, &[10_000, 100_000]).unwrap() {
                assert!(!r.violated, "{r:?}");
            }
        }
    }

    #[test]
    fn correlation_lag_zero_is_variance() {
        let mu = gm_parry();
        let rows = correlation_decay(&mu, &[0, 1], 100_000, 5).unwrap();
        assert!(rows[0].covariance > 0.0);
        let h = mu.entropy();
        let p = mu.stationary();
        let exact_var: f64 = (0..2u8)
            .flat_map(|a| (0..2u8).map(move |b| (a, b)))
            .filter(|&(a, b)| mu.sft().edge(a, b))
            .map(|(a, b)| {
                let r = mu.neg_log_transition(a, b);
                p[a as usize] * mu.transition().get(a as usize, b as usize) * r * r
            })
            .sum::<f64>()
            - h * h;
        assert!((rows[0].covariance - exact_var).abs() < 5.0 * rows[0].std_error + 1e-9);
    }

    #[test]
    fn medians() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn per_seed_orders_results() {
        let out = per_seed(&[5, 1, 3], |s| Ok(s * 2)).unwrap();
        assert_eq!(out, vec![(1, 2), (3, 6), (5, 10)]);
    }
}
