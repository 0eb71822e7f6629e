//! Command-line front end: loads a shift from JSON, runs one experiment and
//! emits a JSON report (stdout) or a CSV series (`--out`).
//!
//! Exit codes: 0 on success, 1 when a check or computation fails, 2 on a
//! usage error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use irregular::analysis::{oscillation_report, slln_estimate};
use irregular::construction::{disjointness_check, independent_family, validate_word_system, PotentialFamily};
use irregular::matrix::SquareMatrix;
use irregular::measures::parry_measure;
use irregular::spectral::dominant_eigendata;
use irregular::substitution::factorial;
use irregular::verify::run_suites;
use irregular::{Error, Sft};

pub const FORMAT_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "irregular", version, about = "Irregular points of mixing subshifts of finite type")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Perron-Frobenius data and Parry measure of the shift.
    Analyze(Common),
    /// The words ξ and η with their validation report.
    Construct(Common),
    /// The equilibrium state μ_q and the masses of ξ and η.
    Measures(Common),
    /// Oscillation report at n = k!, written as CSV.
    Demo(Common),
    /// Entropy estimator along L(x) at n = k!, written as CSV.
    Slln(Common),
    /// Parameter families from square roots of primes.
    Family(Common),
    /// Run the invariant suites.
    Verify(Common),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Shift as JSON: {"d": 2, "matrix": [[1,1],[1,0]]}
    #[arg(long)]
    pub sft: PathBuf,
    /// Potential strength.
    #[arg(long, default_value_t = 1.0)]
    pub q: f64,
    /// Seed of the SplitMix64 stream used for sampling.
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// First checkpoint exponent (n = kmin!).
    #[arg(long, default_value_t = 8)]
    pub kmin: usize,
    /// Last checkpoint exponent (n = kmax!, at most 11).
    #[arg(long, default_value_t = 11)]
    pub kmax: usize,
    /// Cylinder length offset of the entropy estimator.
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    /// Eigensolver tolerance; for `family` also the root-solver tolerance.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// CSV output path (demo, slln).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Suite to run: all, sft, spectral, measures, construction, substitution, analysis.
    #[arg(long, default_value = "all")]
    pub suite: String,
    /// Number of families (at most 25).
    #[arg(long, default_value_t = 5)]
    pub count: usize,
    /// Members per family (at least 2).
    #[arg(long, default_value_t = 8)]
    pub size: usize,
}

/// Everything that determines a run; embedded in every report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(flatten)]
    pub flags: Common,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SftFile {
    d: usize,
    matrix: Vec<Vec<u64>>,
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("ParseError: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("{}: {0}", .0.name())]
    Invalid(#[from] Error),
}

pub fn parse_sft(text: &str) -> Result<Sft, LoadError> {
    let file: SftFile = serde_json::from_str(text)?;
    Ok(Sft::new(file.d, &file.matrix)?)
}

pub fn load_sft(path: &Path) -> Result<Sft, LoadError> {
    let text = fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_sft(&text)
}

enum Failure {
    Usage(String),
    Run(String),
    Checks(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_) | Error::CapExceeded { .. } => Failure::Usage(format!("{}: {e}", e.name())),
            _ => Failure::Run(format!("{}: {e}", e.name())),
        }
    }
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        match e {
            LoadError::Io { .. } => Failure::Usage(format!("--sft: {e}")),
            other => Failure::Run(format!("--sft: {other}")),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match execute(cli.command) {
        Ok(report) => {
            let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&report).expect("serialisable"));
            EXIT_OK
        }
        Err(Failure::Checks(report)) => {
            let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&report).expect("serialisable"));
            EXIT_FAILURE
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Run(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_FAILURE
        }
    }
}

fn envelope(config: &RunConfig, result: Value) -> Value {
    json!({
        "format_version": FORMAT_VERSION,
        "config": config,
        "result": result,
    })
}

fn write_csv(path: &Option<PathBuf>, body: &str) -> Result<String, Failure> {
    let path = path.as_ref().ok_or_else(|| Failure::Usage("--out is required for this command".into()))?;
    fs::write(path, body).map_err(|e| Failure::Usage(format!("--out: cannot write {}: {e}", path.display())))?;
    Ok(path.display().to_string())
}

fn checkpoints(flags: &Common) -> Result<Vec<usize>, Failure> {
    if flags.kmin == 0 || flags.kmin > flags.kmax {
        return Err(Failure::Usage(format!(
            "--kmin/--kmax: need 1 <= kmin <= kmax, got {} and {}",
            flags.kmin, flags.kmax
        )));
    }
    if flags.kmax > irregular::analysis::MAX_CHECKPOINT {
        return Err(Failure::Usage(format!(
            "--kmax: at most {}, got {}",
            irregular::analysis::MAX_CHECKPOINT,
            flags.kmax
        )));
    }
    Ok((flags.kmin..=flags.kmax).map(|k| factorial(k) as usize).collect())
}

fn json_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serialisable")
}

fn execute(command: Command) -> Result<Value, Failure> {
    let (name, flags) = match command {
        Command::Analyze(f) => ("analyze", f),
        Command::Construct(f) => ("construct", f),
        Command::Measures(f) => ("measures", f),
        Command::Demo(f) => ("demo", f),
        Command::Slln(f) => ("slln", f),
        Command::Family(f) => ("family", f),
        Command::Verify(f) => ("verify", f),
    };
    if !(flags.tol > 0.0) {
        return Err(Failure::Usage(format!("--tol: must be positive, got {}", flags.tol)));
    }
    if !(flags.q.is_finite() && flags.q >= 0.0) {
        return Err(Failure::Usage(format!("--q: must be finite and >= 0, got {}", flags.q)));
    }
    let sft = load_sft(&flags.sft)?;
    let config = RunConfig { command: name.to_string(), flags: flags.clone() };
    let result = match name {
        "analyze" => {
            let spectral = dominant_eigendata(&SquareMatrix::new(sft.d(), sft.matrix_f64())?, flags.tol)?;
            let parry = parry_measure(&sft, &spectral)?;
            json!({
                "d": sft.d(),
                "matrix": sft.matrix(),
                "aperiodic": sft.is_aperiodic(),
                "lambda": spectral.lambda,
                "log_lambda": spectral.lambda.ln(),
                "entropy": parry.entropy(),
                "spectral": spectral,
                "parry_transition": parry.transition().rows(),
                "parry_stationary": parry.stationary(),
            })
        }
        "construct" => {
            let pf = PotentialFamily::for_sft(&sft, flags.tol)?;
            let validation = validate_word_system(pf.words(), &sft);
            let (c_xi, c_eta) = pf.transition_counts();
            json!({
                "words": pf.words(),
                "marked_pair": [pf.pair().0, pf.pair().1],
                "transition_counts": { "xi": c_xi, "eta": c_eta },
                "validation": validation,
            })
        }
        "measures" => {
            let pf = PotentialFamily::for_sft(&sft, flags.tol)?;
            let eq = pf.mu_q(flags.q)?;
            let (parry_xi, parry_eta) = pf.parry_xi_eta()?;
            let xi = eq.cylinder_measure(&pf.words().xi)?;
            let eta = eq.cylinder_measure(&pf.words().eta)?;
            let gaps = if flags.q <= 1.0 { Some(pf.gap_functions(flags.q)?) } else { None };
            json!({
                "q": flags.q,
                "rho": eq.rho(),
                "pressure": eq.pressure,
                "entropy": eq.entropy(),
                "transition": eq.transition.rows(),
                "stationary": eq.measure.stationary(),
                "mu_xi": xi,
                "mu_eta": eta,
                "parry_xi": parry_xi,
                "parry_eta": parry_eta,
                "gap_f": gaps.map(|g| g.0),
                "gap_g": gaps.map(|g| g.1),
            })
        }
        "demo" => {
            checkpoints(&flags)?;
            let pf = PotentialFamily::for_sft(&sft, flags.tol)?;
            let report = oscillation_report(&pf, flags.q, flags.seed, flags.kmin, flags.kmax)?;
            let path = write_csv(&flags.out, &report.to_csv())?;
            json!({ "csv": path, "seed": flags.seed, "prefix_len": report.prefix_len, "rows": report.rows })
        }
        "slln" => {
            let times = checkpoints(&flags)?;
            let pf = PotentialFamily::for_sft(&sft, flags.tol)?;
            let report = slln_estimate(&pf, flags.q, flags.seed, flags.m, &times)?;
            let path = write_csv(&flags.out, &report.to_csv())?;
            json!({ "csv": path, "seed": flags.seed, "report": report })
        }
        "family" => {
            let pf = PotentialFamily::for_sft(&sft, irregular::spectral::DEFAULT_TOL)?;
            let families = independent_family(&pf, flags.count, flags.size, flags.tol)?;
            let disjointness = disjointness_check(&families);
            let scan = pf.scan()?;
            let out = json!({
                "branch": scan.branch,
                "max_gap": scan.max(),
                "families": families,
                "disjointness": disjointness,
            });
            if !disjointness.passed() {
                return Err(Failure::Checks(envelope(&config, out)));
            }
            out
        }
        "verify" => {
            let reports = run_suites(&flags.suite, &sft).map_err(|e| Failure::Usage(format!("--suite: {e}")))?;
            let failures: Vec<Value> = reports
                .iter()
                .flat_map(|r| {
                    r.checks
                        .iter()
                        .filter(|c| !c.passed)
                        .map(move |c| json!({ "suite": r.suite, "check": c.name, "detail": c.detail }))
                })
                .collect();
            let passed = failures.is_empty();
            let out = json!({ "passed": passed, "failures": failures, "suites": json_value(&reports) });
            if !passed {
                return Err(Failure::Checks(envelope(&config, out)));
            }
            out
        }
        _ => unreachable!("command names are fixed above"),
    };
    Ok(envelope(&config, result))
}
