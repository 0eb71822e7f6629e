//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p irregular --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use irregular::analysis::{
    factorial_floor, median, oscillation_report, pointwise_dimension, shift_defect, slln_estimate, slln_from_path,
    split_zone_averages,
};
use irregular::construction::{build_word_system, disjointness_check, independent_family, validate_word_system, PotentialFamily};
use irregular::measures::{parry_cylinder_closed_form, parry_measure};
use irregular::rng::{derive_seeds, SymbolRng};
use irregular::spectral::{dominant_eigendata, SpectralData, DEFAULT_TOL};
use irregular::substitution::{factorial, SubstitutionMap};
use irregular::{MarkovMeasure, Sft, SquareMatrix, Symbol, Word};

type Outcome = Result<String, String>;

const BASE_SEED: u64 = 20_240_607;
const SEEDS: usize = 16;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn spectral(sft: &Sft) -> SpectralData {
    dominant_eigendata(&SquareMatrix::new(sft.d(), sft.matrix_f64()).unwrap(), DEFAULT_TOL).unwrap()
}

fn parry(sft: &Sft) -> (SpectralData, MarkovMeasure) {
    let s = spectral(sft);
    let mu = parry_measure(sft, &s).unwrap();
    (s, mu)
}

fn shifts() -> [(&'static str, Sft); 2] {
    [("GM", Sft::golden_mean()), ("FULL2", Sft::full(2).unwrap())]
}

fn seeds() -> Vec<u64> {
    derive_seeds(BASE_SEED, SEEDS)
}

fn spectral_exactness() -> Outcome {
    let (gm, gm_mu) = parry(&Sft::golden_mean());
    let (full, full_mu) = parry(&Sft::full(2).unwrap());
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    ensure((gm.lambda - golden).abs() <= 1e-10, format!("GM λ = {}", gm.lambda))?;
    ensure((full.lambda - 2.0).abs() <= 1e-12, format!("FULL2 λ = {}", full.lambda))?;
    let dh_gm = (gm_mu.entropy() - gm.lambda.ln()).abs();
    let dh_full = (full_mu.entropy() - full.lambda.ln()).abs();
    ensure(dh_gm <= 1e-10 && dh_full <= 1e-10, format!("entropy defects {dh_gm:e}, {dh_full:e}"))?;
    Ok(format!("|λ−φ| = {:.1e}, |λ−2| = {:.1e}", (gm.lambda - golden).abs(), (full.lambda - 2.0).abs()))
}

fn measure_formulas() -> Outcome {
    let mut worst = (0.0f64, 0.0f64, 0.0f64);
    for (name, sft) in shifts() {
        let pf = PotentialFamily::for_sft(&sft, DEFAULT_TOL).map_err(e)?;
        for q in [0.0, 0.1, 0.5, 1.0] {
            let eq = pf.mu_q(q).map_err(e)?;
            for n in 1..=8 {
                let mut total = 0.0;
                for w in sft.words(n).map_err(e)? {
                    let product = eq.measure.cylinder_measure(&w).map_err(e)?;
                    let eigen = eq.cylinder_measure(&w).map_err(e)?;
                    worst.0 = worst.0.max((product - eigen).abs() / eigen);
                    total += product;
                    let children: f64 = sft
                        .successors(w[n - 1])
                        .map(|j| eq.measure.cylinder_measure(&Word::concat(&[&w, &[j]])).unwrap())
                        .sum();
                    worst.1 = worst.1.max((children - product).abs());
                }
                worst.2 = worst.2.max((total - 1.0).abs());
            }
            ensure(
                worst.0 <= 1e-10 && worst.1 <= 1e-10 && worst.2 <= 1e-10,
                format!("{name} q={q}: relative {:.1e}, additivity {:.1e}, mass {:.1e}", worst.0, worst.1, worst.2),
            )?;
        }
    }
    Ok(format!("relative {:.1e}, additivity {:.1e}, mass {:.1e}", worst.0, worst.1, worst.2))
}

fn equilibrium_identity() -> Outcome {
    let mut worst = 0.0f64;
    for (name, sft) in shifts() {
        let pf = PotentialFamily::for_sft(&sft, DEFAULT_TOL).map_err(e)?;
        let (a, b) = pf.pair();
        for q in [0.1, 0.5, 1.0] {
            let eq = pf.mu_q(q).map_err(e)?;
            let defect = (eq.entropy() + q * eq.measure.cylinder_measure(&[a, b]).map_err(e)? - eq.pressure).abs();
            ensure(defect <= 1e-10, format!("{name} q={q}: defect {defect:e}"))?;
            worst = worst.max(defect);
        }
    }
    Ok(format!("max defect {worst:.1e}"))
}

fn construction_exactness() -> Outcome {
    let gm = Sft::golden_mean();
    let ws = build_word_system(&gm).map_err(e)?;
    let w = |s: &str| Word::parse(s).unwrap();
    let got = (ws.alpha, ws.kappa(), ws.gamma.len(), ws.n0, ws.e, ws.theta.clone(), ws.p, ws.s.clone(), ws.t.clone(), ws.xi.clone(), ws.eta.clone(), ws.m);
    let want = (1, 1, 0, 2, 3, w("00"), 3, w("000"), w("100"), w("10000001000"), w("10001001000"), 11);
    ensure(got == want, format!("GM system {got:?}"))?;
    ensure(validate_word_system(&ws, &gm).passed(), "GM validation failed")?;
    let full = Sft::full(2).unwrap();
    let wf = build_word_system(&full).map_err(e)?;
    ensure(
        wf.xi == w("10000100") && wf.eta == w("10010100") && wf.m == 8,
        format!("FULL2 ξ = {}, η = {}, M = {}", wf.xi, wf.eta, wf.m),
    )?;
    ensure(validate_word_system(&wf, &full).passed(), "FULL2 validation failed")?;
    Ok(format!("GM ξ = {}, η = {}; FULL2 ξ = {}, η = {}", ws.xi, ws.eta, wf.xi, wf.eta))
}

fn gap_and_ratio() -> Outcome {
    let mut worst = 0.0f64;
    for (name, sft) in shifts() {
        let pf = PotentialFamily::for_sft(&sft, DEFAULT_TOL).map_err(e)?;
        let (m_xi, m_eta) = pf.parry_xi_eta().map_err(e)?;
        ensure(m_xi == m_eta, format!("{name}: closed form {m_xi:e} vs {m_eta:e}"))?;
        let (s, mu) = parry(&sft);
        let (p_xi, p_eta) = (
            mu.cylinder_measure(&pf.words().xi).map_err(e)?,
            mu.cylinder_measure(&pf.words().eta).map_err(e)?,
        );
        ensure((p_xi - p_eta).abs() <= 1e-12, format!("{name}: products differ by {:e}", p_xi - p_eta))?;
        let closed = parry_cylinder_closed_form(&sft, &s, &pf.words().xi).map_err(e)?;
        ensure((p_xi - closed).abs() <= 1e-12, format!("{name}: product vs closed form"))?;
        let (c_xi, c_eta) = pf.transition_counts();
        ensure(c_eta - c_xi == 1, format!("{name}: counts ({c_xi}, {c_eta})"))?;
        for q in [0.1, 0.5, 1.0] {
            let (xi, eta) = pf.xi_eta_measures(q).map_err(e)?;
            let rel = ((eta / xi) - q.exp()).abs() / q.exp();
            ensure(rel <= 1e-10 && xi < eta, format!("{name} q={q}: relative {rel:e}"))?;
            worst = worst.max(rel);
        }
    }
    Ok(format!("max ratio error {worst:.1e}"))
}

fn entropy_limit() -> Outcome {
    let gm = Sft::golden_mean();
    let pf = PotentialFamily::for_sft(&gm, DEFAULT_TOL).map_err(e)?;
    let log_lambda = spectral(&gm).lambda.ln();
    let gaps: Vec<f64> = [1e-1, 1e-2, 1e-3]
        .iter()
        .map(|&q| pf.mu_q(q).map(|eq| (eq.entropy() - log_lambda).abs()))
        .collect::<Result<_, _>>()
        .map_err(e)?;
    ensure(gaps[0] > gaps[1] && gaps[1] > gaps[2] && gaps[2] <= 1e-3, format!("{gaps:?}"))?;
    Ok(format!("|h − log λ| = {:.2e}, {:.2e}, {:.2e}", gaps[0], gaps[1], gaps[2]))
}

/// `x[..j]` followed by a random admissible tail that leaves `x` at `j`
/// whenever `x[j−1]` has another successor.
fn branch_off(sft: &Sft, x: &[Symbol], j: usize, rng: &mut SymbolRng) -> Vec<Symbol> {
    let mut y = x[..j].to_vec();
    while y.len() < x.len() {
        let options: Vec<Symbol> = match y.last() {
            Some(&l) => sft.successors(l).collect(),
            None => (0..sft.d() as Symbol).collect(),
        };
        let mut pool = options.clone();
        if y.len() == j {
            pool.retain(|&s| s != x[j]);
            if pool.is_empty() {
                pool = options;
            }
        }
        y.push(pool[(rng.next_u64() % pool.len() as u64) as usize]);
    }
    y
}

fn map_properties() -> Outcome {
    let gm = Sft::golden_mean();
    let pf = PotentialFamily::for_sft(&gm, DEFAULT_TOL).map_err(e)?;
    let map = SubstitutionMap::from_word_system(pf.words()).map_err(e)?;
    let m = map.word_len();
    let mu = &pf.mu_q(1.0).map_err(e)?.measure;
    let mut rng = SymbolRng::new(BASE_SEED);
    let n = 10_000;
    let mut swaps = 0usize;
    for (i, seed) in derive_seeds(BASE_SEED, 10_000).into_iter().enumerate() {
        let x = mu.sample_path(n, seed);
        let lx = map.apply_l(&x);
        ensure(map.apply_l(&lx) == x, format!("L∘L ≠ id for sample {i}"))?;
        let iota = map.apply_involution(&x);
        ensure(map.apply_involution(&iota) == x, format!("ι∘ι ≠ id for sample {i}"))?;
        swaps += lx.iter().zip(x.iter()).filter(|(a, b)| a != b).count();
        for k in 1..=3usize {
            let (lo, hi) = (factorial(2 * k) as usize - 1, (factorial(2 * k + 1) as usize).min(n - 1));
            ensure((lo..=hi).all(|t| lx[t] == x[t]), format!("frozen zone {k} altered, sample {i}"))?;
            let deep_lo = factorial(2 * k - 1) as usize + m;
            let deep_hi = (factorial(2 * k) as usize).saturating_sub(1 + 2 * m).min(n - 1);
            ensure((deep_lo..=deep_hi).all(|t| lx[t] == iota[t]), format!("deep swap zone {k} ≠ ι, sample {i}"))?;
        }
        let j = (rng.next_u64() % n as u64) as usize;
        let y = branch_off(&gm, &x, j, &mut rng);
        let before = irregular::sft::separation_index(&x, &y).map_err(e)?.or_len(n);
        let after = irregular::sft::separation_index(&lx, &map.apply_l(&y)).map_err(e)?.or_len(n);
        ensure(after + m >= before, format!("Lipschitz: sep {before} → {after}, sample {i}"))?;
    }
    ensure(swaps > 0, "no rewrites happened at all")?;
    Ok(format!("10⁴ prefixes of length 10⁴, {swaps} rewritten symbols"))
}

fn oscillation() -> Outcome {
    let gm = Sft::golden_mean();
    let pf = PotentialFamily::for_sft(&gm, DEFAULT_TOL).map_err(e)?;
    let (xi, eta) = pf.xi_eta_measures(1.0).map_err(e)?;
    let gap = eta - xi;
    let mut at = (Vec::new(), Vec::new(), Vec::new());
    let mut peaks = 0;
    for seed in seeds() {
        let r = oscillation_report(&pf, 1.0, seed, 9, 11).map_err(e)?;
        let (a9, a10, a11) = (r.rows[0].avg_phi_l, r.rows[1].avg_phi_l, r.rows[2].avg_phi_l);
        at.0.push((a9 - xi).abs());
        at.1.push((a10 - eta).abs());
        at.2.push((a11 - xi).abs());
        if a10 > a9 && a10 > a11 {
            peaks += 1;
        }
    }
    let (m9, m10, m11) = (median(&at.0), median(&at.1), median(&at.2));
    let summary = format!(
        "gap {gap:.3e}; median deviations 9!: {:.2}, 10!: {:.2}, 11!: {:.2} (×gap); peaks {peaks}/16",
        m9 / gap,
        m10 / gap,
        m11 / gap
    );
    ensure(m9 <= 0.3 * gap && m10 <= 0.3 * gap && m11 <= 0.3 * gap && peaks >= 13, summary.clone())?;
    Ok(summary)
}

fn slln() -> Outcome {
    let gm = Sft::golden_mean();
    let pf = PotentialFamily::for_sft(&gm, DEFAULT_TOL).map_err(e)?;
    let h = pf.mu_q(0.5).map_err(e)?.entropy();
    let n = factorial(10) as usize;
    let devs: Vec<f64> = seeds()
        .into_iter()
        .map(|s| slln_estimate(&pf, 0.5, s, 2, &[n]).map(|r| (r.rows[0].estimate - h).abs()))
        .collect::<Result<_, _>>()
        .map_err(e)?;
    let med = median(&devs);
    ensure(med <= 0.05 * h, format!("median deviation {med:e}, h = {h}"))?;

    let (_, parry_mu) = parry(&gm);
    let zeros = vec![0u8; 100_000];
    let est = slln_from_path(&parry_mu, &zeros, 0, &[100_000]).map_err(e)?.rows[0].estimate;
    let nf = 100_000f64;
    let exact = -(parry_mu.stationary()[0].ln() + (nf - 1.0) * parry_mu.transition().get(0, 0).ln()) / nf;
    ensure((est - exact).abs() <= 1e-12, format!("fixture {est} vs {exact}"))?;
    Ok(format!("median |est − h| = {med:.2e} (h = {h:.6}); fixture error {:.1e}", (est - exact).abs()))
}

fn split_sums() -> Outcome {
    let gm = Sft::golden_mean();
    let pf = PotentialFamily::for_sft(&gm, DEFAULT_TOL).map_err(e)?;
    let map = SubstitutionMap::from_word_system(pf.words()).map_err(e)?;
    let eq = pf.mu_q(0.5).map_err(e)?;
    let h = eq.entropy();
    let n = factorial(10) as usize;
    let mut frozen = Vec::new();
    let mut other = Vec::new();
    for seed in seeds() {
        let x = eq.measure.sample_path(n + 1 + map.word_len(), seed);
        let s = split_zone_averages(&map.apply_l(&x), &eq.transition, n).map_err(e)?;
        ensure(s.frozen_len + s.other_len == n, "partition sizes")?;
        frozen.push((s.frozen_avg.unwrap() - h).abs());
        other.push((s.other_avg.unwrap() - h).abs());
    }
    let (mf, mo) = (median(&frozen), median(&other));
    ensure(mf <= 0.05 * h && mo <= 0.05 * h, format!("medians {mf:e}, {mo:e}, h = {h}"))?;
    Ok(format!("median deviations S₁ {mf:.2e}, S₂ {mo:.2e} (h = {h:.6})"))
}

fn pointwise() -> Outcome {
    let gm = Sft::golden_mean();
    let (s, mu) = parry(&gm);
    let n = 100_000;
    let devs: Vec<f64> = seeds()
        .into_iter()
        .map(|seed| pointwise_dimension(&mu, &mu.sample_path(n, seed), n).map(|d| (d - s.lambda.ln()).abs()))
        .collect::<Result<_, _>>()
        .map_err(e)?;
    let med = median(&devs);
    ensure(med <= 0.02, format!("median deviation {med}"))?;
    Ok(format!("median |dim − log λ| = {med:.2e}"))
}

fn shift_defects() -> Outcome {
    let gm = Sft::golden_mean();
    let pf = PotentialFamily::for_sft(&gm, DEFAULT_TOL).map_err(e)?;
    let map = SubstitutionMap::from_word_system(pf.words()).map_err(e)?;
    let mu = &pf.mu_q(1.0).map_err(e)?.measure;
    ensure(factorial_floor(1_000_000) == 9, "m(10⁶) ≠ 9")?;
    let times = [10_000, 100_000, 1_000_000];
    let mut worst = 0;
    for seed in seeds() {
        let x = mu.sample_path(1_000_000 + map.word_len() + 1, seed);
        for r in shift_defect(&map, &x, &times).map_err(e)? {
            ensure(!r.violated, format!("seed {seed}: {r:?}"))?;
            worst = worst.max(r.defect);
        }
    }
    Ok(format!("largest defect {worst}, bounds (7, 8, 9) + 1"))
}

fn families() -> Outcome {
    let gm = Sft::golden_mean();
    let pf = PotentialFamily::for_sft(&gm, DEFAULT_TOL).map_err(e)?;
    let tol = 1e-12;
    let fams = independent_family(&pf, 5, 8, tol).map_err(e)?;
    let radicands: Vec<u64> = fams.iter().map(|f| f.generator.radicand).collect();
    ensure(radicands == [2, 3, 5, 7, 11], format!("generators {radicands:?}"))?;
    let report = disjointness_check(&fams);
    ensure(report.members == 40, format!("{} members", report.members))?;
    ensure(report.epsilon_collisions.is_empty(), format!("{:?}", report.epsilon_collisions))?;
    ensure(report.target_collisions.is_empty(), format!("{:?}", report.target_collisions))?;
    let words: Vec<Word> = (1..=6).flat_map(|n| gm.words(n).unwrap()).collect();
    let mut worst = 0.0f64;
    for f in &fams {
        for (&q, &eps) in f.qs.iter().zip(&f.epsilons) {
            let defect = (pf.gap(f.branch, q).map_err(e)? - eps).abs();
            ensure(defect <= 1e-10, format!("|f(q) − ε| = {defect:e} at q = {q}"))?;
            worst = worst.max(defect);
            let eq = pf.mu_q(q).map_err(e)?;
            for w in &words {
                ensure(eq.measure.cylinder_measure(w).map_err(e)? > 0.0, format!("μ_q([{w}]) = 0"))?;
            }
        }
    }
    Ok(format!("40 distinct ε, max |f(q) − ε| = {worst:.1e}"))
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, Option<Duration>, fn() -> Outcome); 13] = [
        (1, "spectral exactness", Some(Duration::from_secs(1)), spectral_exactness),
        (2, "measure formulas", Some(Duration::from_secs(10)), measure_formulas),
        (3, "equilibrium identity", Some(Duration::from_secs(1)), equilibrium_identity),
        (4, "construction exactness", Some(Duration::from_secs(1)), construction_exactness),
        (5, "gap and ratio laws", Some(Duration::from_secs(1)), gap_and_ratio),
        (6, "entropy limit", Some(Duration::from_secs(1)), entropy_limit),
        (7, "map L properties", Some(Duration::from_secs(30)), map_properties),
        (8, "oscillation", None, oscillation),
        (9, "SLLN estimator", None, slln),
        (10, "split sums", None, split_sums),
        (11, "pointwise dimension", Some(Duration::from_secs(10)), pointwise),
        (12, "shift defect", Some(Duration::from_secs(60)), shift_defects),
        (13, "family generation", Some(Duration::from_secs(60)), families),
    ];
    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let slow = limit.is_some_and(|l| elapsed > l);
        let (status, detail) = match (&outcome, slow) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over the {:?} budget", limit.unwrap())),
            (Err(d), _) => ("FAIL", d.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {id:>2} [{status}] {name}: {detail} ({:.2}s)", elapsed.as_secs_f64());
    }
    println!("{} of 13 criteria passed", 13 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
