use thiserror::Error;

use crate::linalg::Mode;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("scalar mode mismatch: expected {expected}, found {found}")]
    ModeMismatch { expected: Mode, found: Mode },

    #[error("shape mismatch in {op}: {detail}")]
    Shape { op: &'static str, detail: String },

    #[error("length mismatch: expected {expected}, found {found}")]
    Length { expected: usize, found: usize },

    #[error("non-finite value in float matrix")]
    NonFinite,

    #[error("operators {i} and {j} do not commute (residual {residual:e})")]
    NonCommuting { i: usize, j: usize, residual: f64 },

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("joint eigenvalue deflation failed: {0}")]
    Deflation(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A mathematical invariant the code relies on was observed to fail.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("invalid input: {0}")]
    Input(String),
}

impl Error {
    pub(crate) fn shape(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Shape {
            op,
            detail: detail.into(),
        }
    }
}
