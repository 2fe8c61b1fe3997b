use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Input violates a structural invariant or an operation precondition.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// A document could not be parsed.
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    /// A weighting does not match its host structure.
    #[error("weighting has {got} values but the host has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },

    /// The requested computation exceeds the configured budget.
    #[error("budget exceeded: {0}")]
    Capacity(String),

    /// A construction that cannot fail under its preconditions did fail.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

pub(crate) fn capacity(msg: impl Into<String>) -> Error {
    Error::Capacity(msg.into())
}

pub(crate) fn parse_err(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        location: location.into(),
        message: message.into(),
    }
}
