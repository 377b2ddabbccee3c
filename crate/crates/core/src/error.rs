use thiserror::Error;

/// Crate-wide error type.
///
/// `Capacity` is reserved for requests that are well-formed but exceed a
/// hard size guard (exhaustive enumeration, dense matrix powers, explicit
/// cube materialization); callers may want to distinguish it from plain
/// invalid input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }
}
