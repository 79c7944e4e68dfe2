use thiserror::Error;

/// Failure modes shared by every module in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("trajectory diverged at iteration {iteration}")]
    Diverged { iteration: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

pub(crate) fn insufficient(msg: impl Into<String>) -> Error {
    Error::InsufficientData(msg.into())
}
