use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("adjacency matrix is not square: row {row} has {len} entries, expected {expected}")]
    NonSquareMatrix { row: usize, len: usize, expected: usize },

    #[error("adjacency entry ({row}, {col}) = {value} is not 0 or 1")]
    InvalidAdjacencyEntry { row: usize, col: usize, value: u8 },

    #[error("self-loop at vertex {0}: diagonal adjacency entries must be 0")]
    SelfLoopPresent(usize),

    #[error("empty network: at least one oscillator is required")]
    EmptyNetwork,

    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch { what: String, expected: usize, found: usize },

    #[error("{what} must be non-negative and finite, got {value}")]
    NegativeValue { what: String, value: f64 },

    #[error("invalid parameter {what}: {reason}")]
    InvalidParameter { what: String, reason: String },

    #[error("delayed time {t} precedes stored history start {start}")]
    AccessorOutOfRange { t: f64, start: f64 },

    #[error("time {t} is outside the covered range [{start}, {end}]")]
    OutOfRange { t: f64, start: f64, end: f64 },

    #[error("integration step {0} is not positive after applying the delay cap")]
    InvalidStep(f64),

    #[error("non-finite state at t = {0}")]
    NonFiniteState(f64),

    #[error("P(m, k) requires k <= m (m = {m}, k = {k})")]
    KExceedsM { m: u64, k: u64 },

    #[error("P({m}, {k}) overflows 128-bit integers")]
    PermutationOverflow { m: u64, k: u64 },

    #[error("eta = {0} must exceed 2")]
    EtaTooSmall(f64),

    #[error("convex-combination coefficients overflow for N = {n}, eta = {eta}")]
    CoefficientOverflow { n: usize, eta: f64 },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("topology is not strongly connected")]
    NotStronglyConnected,

    #[error("certificate is not valid")]
    CertificateInvalid,

    #[error("envelope never reaches the target: beta*d_inf = {target} <= asymptote {asymptote}")]
    EnvelopeInconclusive { target: f64, asymptote: f64 },

    #[error("trajectory ends at {available} but {needed} is required")]
    HorizonTooShort { needed: f64, available: f64 },

    #[error("topology is not all-to-all")]
    NotAllToAll,

    #[error("maximal delay is zero; the delay-dependent rate degenerates")]
    ZeroDelay,

    #[error("only {0} usable samples for the decay fit (need at least 10)")]
    InsufficientSamples(usize),

    #[error("unknown scenario '{0}'")]
    UnknownScenario(String),

    #[error("parse error in {path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub(crate) fn invalid(what: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            what: what.into(),
            reason: reason.into(),
        }
    }
}
