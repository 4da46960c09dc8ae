use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed or mismatched input.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A documented precondition does not hold.
    #[error("contract violation: {0}")]
    Contract(String),
    /// A configured budget was exhausted.
    #[error("resource budget exceeded: {0}")]
    Resource(String),
    /// An internal consistency check failed.
    #[error("internal consistency failure: {0}")]
    Internal(String),
    /// A monomial order failed the t-diagonal property.
    #[error("order is not t-diagonal: {0}")]
    DiagonalViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}

pub(crate) fn contract<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Contract(msg.into()))
}
