use thiserror::Error;

/// Errors raised by the invariant computations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("empty point set")]
    EmptyInput,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("resource cap exceeded: {0}")]
    CapExceeded(String),

    #[error("polytope is not IDP: {0}")]
    NotIdp(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
