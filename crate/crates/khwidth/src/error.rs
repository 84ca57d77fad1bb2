use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("diagram has {crossings} crossings, above the naive backend cap of {cap}; use the scan backend")]
    Capacity { crossings: usize, cap: usize },

    #[error("checkerboard colouring failed: {0}")]
    Coloring(String),

    #[error("no framing offset in [{lo}, {hi}] reproduces det(tau(n)) = |n|")]
    NotPreferred { lo: i64, hi: i64 },

    #[error("hypothesis failure: {0}")]
    Hypothesis(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidDiagram(msg.into()))
}
