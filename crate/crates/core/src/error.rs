use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("alphabet size {0} is not supported (need 2 <= d <= 256)")]
    AlphabetSize(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix entry ({row}, {col}) = {value} is not 0 or 1")]
    InvalidEntry { row: usize, col: usize, value: u64 },
    #[error("symbol {0} has an all-zero row or column")]
    StrandedSymbol(usize),
    #[error("symbol {symbol} out of range for alphabet of size {d}")]
    SymbolOutOfRange { symbol: usize, d: usize },
    #[error("word length {n} exceeds the enumeration cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("graph has no cycle")]
    NoCycle,
    #[error("no path from {from} to {to}")]
    NoPath { from: usize, to: usize },
    #[error("no path of length {n} from {from} to {to}")]
    NoPathOfLength { from: usize, to: usize, n: usize },
    #[error("matrix is not primitive")]
    NotPrimitive,
    #[error("power iteration did not converge within {0} iterations")]
    MaxIterations(usize),
    #[error("matrix is not stochastic: {0}")]
    NotStochastic(String),
    #[error("transition ({0}, {1}) is positive but not an edge of the shift")]
    NotCompatible(usize, usize),
    #[error("word is not admissible")]
    NotAdmissible,
    #[error("shift is not topologically mixing")]
    NotMixing,
    #[error("word construction failed: {0}")]
    ConstructionFailed(String),
    #[error("gap violation at q = {q}: mu([xi]) = {xi} is not below mu([eta]) = {eta}")]
    GapViolation { q: f64, xi: f64, eta: f64 },
    #[error("epsilon {eps} is outside (0, {max}]")]
    EpsilonOutOfRange { eps: f64, max: f64 },
    #[error("root solver failed to reach tolerance for epsilon {0}")]
    SolverFailed(f64),
    #[error("index {0} is beyond 20!")]
    IndexOverflow(u64),
    #[error("xi and eta have different lengths ({0} vs {1})")]
    PatternMismatch(usize, usize),
    #[error("prefix of length {len} is too short (need {need})")]
    PrefixTooShort { len: usize, need: usize },
    #[error("cylinder has zero measure")]
    ZeroMeasure,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// Short variant name, used in CLI diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            Error::AlphabetSize(_) => "AlphabetSize",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::InvalidEntry { .. } => "InvalidEntry",
            Error::StrandedSymbol(_) => "StrandedSymbol",
            Error::SymbolOutOfRange { .. } => "SymbolOutOfRange",
            Error::CapExceeded { .. } => "CapExceeded",
            Error::LengthMismatch(..) => "LengthMismatch",
            Error::NoCycle => "NoCycle",
            Error::NoPath { .. } => "NoPath",
            Error::NoPathOfLength { .. } => "NoPathOfLength",
            Error::NotPrimitive => "NotPrimitive",
            Error::MaxIterations(_) => "MaxIterations",
            Error::NotStochastic(_) => "NotStochastic",
            Error::NotCompatible(..) => "NotCompatible",
            Error::NotAdmissible => "NotAdmissible",
            Error::NotMixing => "NotMixing",
            Error::ConstructionFailed(_) => "ConstructionFailed",
            Error::GapViolation { .. } => "GapViolation",
            Error::EpsilonOutOfRange { .. } => "EpsilonOutOfRange",
            Error::SolverFailed(_) => "SolverFailed",
            Error::IndexOverflow(_) => "IndexOverflow",
            Error::PatternMismatch(..) => "PatternMismatch",
            Error::PrefixTooShort { .. } => "PrefixTooShort",
            Error::ZeroMeasure => "ZeroMeasure",
            Error::InvalidParameter(_) => "InvalidParameter",
        }
    }
}
