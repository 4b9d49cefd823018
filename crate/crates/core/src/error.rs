use thiserror::Error;

/// Errors raised while building or evaluating detection problems.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument fell outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A problem parameter violates its invariant. `field` is a dotted path
    /// such as `priors.pi0`.
    #[error("{field}: {message}")]
    Validation { field: String, message: String },

    /// A requested point lies outside the achievable region.
    #[error("range error: {0}")]
    Range(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
