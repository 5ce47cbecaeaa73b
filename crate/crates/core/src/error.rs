use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("refinement cap of {0} steps reached")]
    RefinementCap(usize),
    #[error("no admissible period below cap {0}")]
    PeriodCap(u64),
    #[error("test function is not smooth along {direction}: {detail}")]
    NotSmooth { direction: String, detail: String },
    #[error("hypothesis {name} fails: {detail}")]
    Hypothesis { name: String, detail: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }

    /// True for failures that report a mathematical violation rather than bad usage.
    pub fn is_mathematical(&self) -> bool {
        matches!(self, Error::Hypothesis { .. } | Error::NotSmooth { .. } | Error::Internal(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
