use thiserror::Error;

/// Errors raised by the library. Each variant maps onto one CLI exit code.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// An exact integer result does not fit the checked integer range.
    #[error("range error: {0}")]
    Range(String),

    #[error("resource limit exceeded: {what} needs {needed}, budget is {budget}")]
    Resource {
        what: String,
        needed: u128,
        budget: u128,
    },

    #[error("numeric failure: {0}")]
    Numeric(String),

    /// Two independent evaluation routes disagree.
    #[error("internal consistency failure: {what}: {left} vs {right} (allowed {allowed})")]
    Consistency {
        what: String,
        left: f64,
        right: f64,
        allowed: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn range(msg: impl Into<String>) -> Self {
        Error::Range(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}
