use crate::cube::BooleanKind;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} of size {requested} exceeds the supported maximum {max}")]
    Capacity {
        what: &'static str,
        requested: usize,
        max: usize,
    },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("value {value} at index {index} is outside the range of kind `{kind}`")]
    Range {
        index: usize,
        value: f64,
        kind: BooleanKind,
    },

    #[error("function of kind `{found}` is not accepted here (expected {expected})")]
    WrongKind {
        expected: &'static str,
        found: BooleanKind,
    },

    #[error("coordinate {i} is outside 1..={n}")]
    Coordinate { i: usize, n: usize },

    #[error("input must have mean zero, found {mean:e}")]
    NonZeroMean { mean: f64 },

    #[error("invalid generator: {0}")]
    InvalidGenerator(String),

    #[error("generator is disconnected: spectral gap {gap:e}")]
    Disconnected { gap: f64 },

    #[error("tail condition at level {k} violated: max |coefficient| = {max_violation:e}")]
    TailViolation { k: usize, max_violation: f64 },

    #[error("search exhausted after {trials} trials: {reason}")]
    SearchExhausted { trials: u64, reason: String },

    #[error("infeasible construction: {0}")]
    Infeasible(String),

    #[error("solver did not converge: {0}")]
    Solver(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable reason code, used by the CLI and the C ABI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Capacity { .. } => "E_CAPACITY",
            Error::InvalidParameter { .. } => "E_PARAM",
            Error::DimensionMismatch { .. } => "E_DIMENSION",
            Error::Range { .. } => "E_RANGE",
            Error::WrongKind { .. } => "E_KIND",
            Error::Coordinate { .. } => "E_COORDINATE",
            Error::NonZeroMean { .. } => "E_MEAN",
            Error::InvalidGenerator(_) => "E_GENERATOR",
            Error::Disconnected { .. } => "E_DISCONNECTED",
            Error::TailViolation { .. } => "E_TAIL",
            Error::SearchExhausted { .. } => "E_SEARCH_EXHAUSTED",
            Error::Infeasible(_) => "E_INFEASIBLE",
            Error::Solver(_) => "E_SOLVER",
            Error::Format(_) => "E_FORMAT",
            Error::Io(_) => "E_IO",
            Error::Json(_) => "E_JSON",
        }
    }

    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
