use thiserror::Error;

/// Failure categories. Each maps onto one CLI exit code.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or out-of-range input.
    #[error("invalid input: {0}")]
    Input(String),
    /// Input is well formed but the requested value does not exist
    /// (pole of an L-factor, trivial zero, non-unit inverse, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// A p-adic computation ran out of precision.
    #[error("precision exhausted: {0}")]
    Precision(String),
    /// A brute-force guard refused the job.
    #[error("resource guard: {0}")]
    Resource(String),
    /// Curve data failed validation.
    #[error("validation failed: {0}")]
    Validation(String),
    /// An internal identity that should always hold did not.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) | Error::Validation(_) => 2,
            Error::Domain(_) | Error::Precision(_) | Error::Internal(_) => 3,
            Error::Resource(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::Input(_) => "input",
            Error::Domain(_) => "domain",
            Error::Precision(_) => "precision",
            Error::Resource(_) => "resource",
            Error::Validation(_) => "validation",
            Error::Internal(_) => "internal",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
