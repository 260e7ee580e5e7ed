use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GirgError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("argument outside the domain of `{op}`: {reason}")]
    Domain { op: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("precondition of `{op}` violated: {reason}")]
    Precondition { op: &'static str, reason: String },

    #[error("requested accuracy {requested:e} not reachable (achieved {achieved:e})")]
    AccuracyUnreachable { requested: f64, achieved: f64 },

    #[error("graph space too large: n = {n} exceeds the enumerable cap of {cap}")]
    TooLarge { n: usize, cap: usize },

    #[error("ratio undefined: sample mean is zero")]
    ZeroMean,

    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, GirgError>;

pub(crate) fn domain(op: &'static str, reason: impl Into<String>) -> GirgError {
    GirgError::Domain {
        op,
        reason: reason.into(),
    }
}

pub(crate) fn precondition(op: &'static str, reason: impl Into<String>) -> GirgError {
    GirgError::Precondition {
        op,
        reason: reason.into(),
    }
}
