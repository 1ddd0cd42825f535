use thiserror::Error;

/// Errors raised by jet arithmetic, field evaluation and the symmetry actions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("coordinate index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("division by zero (divisor {0:e})")]
    DivisionByZero(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("branch error: {0}")]
    Branch(String),

    #[error("operation requires a non-zero dynamical exponent")]
    ZeroDynamicalExponent,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
