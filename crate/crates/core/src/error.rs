use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("multi-index dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid bundle: {0}")]
    InvalidSpec(String),

    #[error("parse error at position {pos}: {message}")]
    Parse { pos: usize, message: String },

    #[error("division by zero")]
    DivisionByZero,

    #[error("density is not a total divergence: {0}")]
    NotExact(String),

    #[error("outside the supported fragment: {0}")]
    UnsupportedFragment(String),

    #[error("vector field is not projectable: base components depend on fibre coordinates")]
    NotProjectable,

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
