use thiserror::Error;

/// Errors raised by the algebra, cohomology and scanning layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("dimension mismatch: expected {expected} variables, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("mixed coefficient domains: {0}")]
    MixedDomain(String),
    #[error("characteristic mismatch: expected {expected}, found {found}")]
    CharacteristicMismatch { expected: u64, found: u64 },
    #[error("{0} is not homogeneous")]
    NotHomogeneous(String),
    #[error("zero input where a nonzero one is required: {0}")]
    Zero(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("inconclusive window: {0}")]
    InconclusiveWindow(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("bad prime {p}: {reason}")]
    BadPrime { p: u64, reason: String },
    #[error("genericity failure after {attempts} attempts (seed {seed}): {reason}")]
    Genericity {
        seed: u64,
        attempts: usize,
        reason: String,
    },
    #[error("subspace not stable under the twisted Frobenius: {0}")]
    StabilityViolation(String),
    #[error("chain inclusion failed at level {level}: {detail}")]
    ChainInclusion { level: u32, detail: String },
    #[error("theorem violation:\n{0}")]
    TheoremViolation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub(crate) fn resource(msg: impl Into<String>) -> Self {
        Error::ResourceLimit(msg.into())
    }

    /// Whether this error came from a configured resource cap.
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::ResourceLimit(_))
    }
}
