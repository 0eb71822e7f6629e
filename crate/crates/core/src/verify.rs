//! Invariant suites for each module, runnable against any mixing shift.
//!
//! Every suite is deterministic and cheap enough to run from the command
//! line. A suite that cannot even be set up (for instance a shift that is
//! not mixing) reports the setup error as a failed check.

use serde::Serialize;

use crate::analysis::{birkhoff_count, frozen_count, pointwise_dimension, split_zone_averages};
use crate::construction::{validate_word_system, Check, PotentialFamily};
use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::measures::{parry_cylinder_closed_form, parry_measure, KahanSum, MarkovMeasure};
use crate::rng::SymbolRng;
use crate::sft::{separation_index, Sft, Symbol, Word};
use crate::spectral::{dominant_eigendata, SpectralData, DEFAULT_TOL};
use crate::substitution::{find_occurrences, SubstitutionMap};

pub const SUITES: [&str; 6] = ["sft", "spectral", "measures", "construction", "substitution", "analysis"];

const SEED: u64 = 0x1e5_5eed;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Runs one named suite, or every suite for `"all"`.
pub fn run_suites(name: &str, sft: &Sft) -> Result<Vec<SuiteReport>> {
    let names: Vec<&str> = match name {
        "all" => SUITES.to_vec(),
        n if SUITES.contains(&n) => vec![n],
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown suite {other:?}; expected one of all, {}",
                SUITES.join(", ")
            )))
        }
    };
    Ok(names
        .into_iter()
        .map(|suite| {
            let checks = match suite_checks(suite, sft) {
                Ok(c) => c,
                Err(e) => vec![check("setup", false, format!("{}: {e}", e.name()))],
            };
            SuiteReport { suite: suite.to_string(), checks }
        })
        .collect())
}

fn suite_checks(suite: &str, sft: &Sft) -> Result<Vec<Check>> {
    match suite {
        "sft" => sft_suite(sft),
        "spectral" => spectral_suite(sft),
        "measures" => measures_suite(sft),
        "construction" => construction_suite(sft),
        "substitution" => substitution_suite(sft),
        "analysis" => analysis_suite(sft),
        _ => unreachable!("suite names are checked by the caller"),
    }
}

fn check(name: &str, passed: bool, detail: impl Into<String>) -> Check {
    Check { name: name.to_string(), passed, detail: detail.into() }
}

fn parry(sft: &Sft) -> Result<(SpectralData, MarkovMeasure)> {
    let s = dominant_eigendata(&SquareMatrix::new(sft.d(), sft.matrix_f64())?, DEFAULT_TOL)?;
    let mu = parry_measure(sft, &s)?;
    Ok((s, mu))
}

/// Word length for exhaustive checks, kept so that at most a few thousand
/// words are enumerated.
fn enumeration_len(sft: &Sft, max: usize) -> usize {
    (1..=max).take_while(|&n| sft.count_words(n) <= 4096).last().unwrap_or(1)
}

fn sft_suite(sft: &Sft) -> Result<Vec<Check>> {
    let mut out = vec![check("aperiodic", sft.is_aperiodic(), "")];
    let n_max = enumeration_len(sft, 6);
    let counts_ok = (1..=n_max).all(|n| sft.words(n).map(|w| w.len() as u128) == Ok(sft.count_words(n)));
    out.push(check("word_counts", counts_ok, format!("n <= {n_max}")));
    let words = sft.words(n_max)?;
    let closed = words.iter().all(|w| {
        (0..w.len()).all(|i| (i + 1..=w.len()).all(|j| sft.is_admissible(&w[i..j]).unwrap_or(false)))
    });
    out.push(check("subword_closure", closed, ""));

    let (_, mu) = parry(sft)?;
    let mut ultra = true;
    for seed in 0..64 {
        let paths: Vec<Word> = (0..3).map(|k| mu.sample_path(12, seed * 3 + k)).collect();
        let sep = |a: &Word, b: &Word| separation_index(a, b).map(|s| s.or_len(12));
        let (xy, yz, xz) = (sep(&paths[0], &paths[1])?, sep(&paths[1], &paths[2])?, sep(&paths[0], &paths[2])?);
        ultra &= xz >= xy.min(yz);
    }
    out.push(check("ultrametric", ultra, "64 sampled triples"));
    Ok(out)
}

fn spectral_suite(sft: &Sft) -> Result<Vec<Check>> {
    let (s, _) = parry(sft)?;
    let su: f64 = s.u.iter().sum();
    let uv: f64 = s.u.iter().zip(&s.v).map(|(a, b)| a * b).sum();
    Ok(vec![
        check("residual", s.residual <= s.tol, format!("{:e}", s.residual)),
        check("positive_vectors", s.u.iter().chain(&s.v).all(|&x| x > 0.0), ""),
        check("normalisation", (su - 1.0).abs() <= 1e-10 && (uv - 1.0).abs() <= 1e-10, format!("Σu = {su}, uᵀv = {uv}")),
        check(
            "lambda_bounds",
            s.lambda >= 1.0 && s.lambda <= sft.d() as f64 + 1e-12,
            format!("λ = {}", s.lambda),
        ),
    ])
}

fn measures_suite(sft: &Sft) -> Result<Vec<Check>> {
    let (s, mu) = parry(sft)?;
    let mut out = vec![check(
        "parry_entropy",
        (mu.entropy() - s.lambda.ln()).abs() <= 1e-10,
        format!("h = {}, log λ = {}", mu.entropy(), s.lambda.ln()),
    )];
    let n_max = enumeration_len(sft, 8);
    let mut worst = 0.0f64;
    let mut mass = KahanSum::new(0.0);
    for w in sft.words(n_max)? {
        let a = mu.cylinder_measure(&w)?;
        let b = parry_cylinder_closed_form(sft, &s, &w)?;
        worst = worst.max((a - b).abs() / b);
        mass.add(a);
    }
    out.push(check("closed_form", worst <= 1e-10, format!("max relative error {worst:e}")));
    out.push(check("total_mass", (mass.value() - 1.0).abs() <= 1e-10, format!("{}", mass.value())));

    let pf = PotentialFamily::for_sft(sft, DEFAULT_TOL)?;
    let pair = pf.pair();
    let mut worst = 0.0f64;
    for q in [0.1, 0.5, 1.0] {
        let eq = pf.mu_q(q)?;
        let pair_mass = eq.cylinder_measure(&[pair.0, pair.1])?;
        worst = worst.max((eq.entropy() + q * pair_mass - eq.pressure).abs());
    }
    out.push(check("equilibrium_identity", worst <= 1e-10, format!("max defect {worst:e}")));
    Ok(out)
}

fn construction_suite(sft: &Sft) -> Result<Vec<Check>> {
    let pf = PotentialFamily::for_sft(sft, DEFAULT_TOL)?;
    let mut out: Vec<Check> = validate_word_system(pf.words(), sft).checks;
    let (c_xi, c_eta) = pf.transition_counts();
    let (m_xi, m_eta) = pf.parry_xi_eta()?;
    out.push(check("parry_equal", m_xi == m_eta, format!("{m_xi:e} vs {m_eta:e}")));
    let mut worst = 0.0f64;
    for q in [0.1, 0.5, 1.0] {
        let (xi, eta) = pf.xi_eta_measures(q)?;
        let expected = (q * (c_eta as f64 - c_xi as f64)).exp();
        worst = worst.max(((eta / xi) - expected).abs() / expected);
    }
    out.push(check("ratio_law", worst <= 1e-10, format!("max relative error {worst:e}")));
    let max = pf.scan()?.max();
    let eps = 0.5 * max;
    let solved = pf.solve_epsilon(eps, 1e-12).and_then(|q| pf.gap(pf.scan()?.branch, q));
    out.push(check(
        "solver",
        solved.as_ref().is_ok_and(|v| (v - eps).abs() <= 1e-12),
        format!("{solved:?}"),
    ));
    Ok(out)
}

fn substitution_suite(sft: &Sft) -> Result<Vec<Check>> {
    let pf = PotentialFamily::for_sft(sft, DEFAULT_TOL)?;
    let map = SubstitutionMap::from_word_system(pf.words())?;
    let mu = &pf.mu_q(1.0)?.measure;
    let m = map.word_len();
    let (mut involution, mut iota, mut frozen, mut lipschitz) = (true, true, true, true);
    let mut rng = SymbolRng::new(SEED);
    for seed in 0..32 {
        let x = mu.sample_path(6000, seed);
        let lx = map.apply_l(&x);
        involution &= map.apply_l(&lx) == x;
        iota &= map.apply_involution(&map.apply_involution(&x)) == x;
        frozen &= (0..x.len()).filter(|&i| map.zones().is_frozen(i)).all(|i| lx[i] == x[i]);
        let j = (rng.next_u64() % x.len() as u64) as usize;
        let y = resample_tail(sft, &x, j, &mut rng);
        let before = separation_index(&x, &y)?.or_len(x.len());
        let after = separation_index(&lx, &map.apply_l(&y))?.or_len(x.len());
        lipschitz &= after + m >= before;
    }
    Ok(vec![
        check("l_involution", involution, "32 sampled prefixes"),
        check("iota_involution", iota, ""),
        check("frozen_fidelity", frozen, ""),
        check("lipschitz", lipschitz, ""),
    ])
}

/// Copy of `x` that keeps `x[..j]` and continues with a random admissible
/// tail differing at `j` when possible.
pub(crate) fn resample_tail(sft: &Sft, x: &[Symbol], j: usize, rng: &mut SymbolRng) -> Word {
    let mut y = x[..j].to_vec();
    while y.len() < x.len() {
        let options: Vec<Symbol> = match y.last() {
            Some(&last) => sft.successors(last).collect(),
            None => (0..sft.d() as Symbol).collect(),
        };
        let i = y.len();
        let preferred: Vec<Symbol> = if i == j {
            options.iter().copied().filter(|&s| s != x[j]).collect()
        } else {
            Vec::new()
        };
        let pool = if preferred.is_empty() { &options } else { &preferred };
        y.push(pool[(rng.next_u64() % pool.len() as u64) as usize]);
    }
    Word::new(y)
}

fn analysis_suite(sft: &Sft) -> Result<Vec<Check>> {
    let (s, mu) = parry(sft)?;
    let pf = PotentialFamily::for_sft(sft, DEFAULT_TOL)?;
    let x = mu.sample_path(100_001, SEED);
    let mut partition = true;
    for n in [1, 24, 121, 5040, 100_000] {
        let split = split_zone_averages(&x, mu.transition(), n)?;
        partition &= split.frozen_len + split.other_len == n && split.frozen_len == frozen_count(n);
    }
    let xi = &pf.words().xi;
    let times = [1000, 10_000, 100_000];
    let counts = birkhoff_count(&x, xi, &times)?;
    let starts = find_occurrences(&x, xi);
    let agree = counts
        .iter()
        .all(|r| r.count == starts.iter().filter(|&&i| i < r.n).count());
    let pd = pointwise_dimension(&mu, &x, 100_000)?;
    Ok(vec![
        check("split_partition", partition, ""),
        check("birkhoff_vs_occurrences", agree, ""),
        check(
            "pointwise_dimension",
            (pd - s.lambda.ln()).abs() <= 0.05,
            format!("{pd} vs log λ = {}", s.lambda.ln()),
        ),
    ])
}
