use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A query exceeds the range covered by a precomputed table.
    #[error("{what} = {value} is beyond the table limit {limit}")]
    OutOfRange { what: &'static str, value: f64, limit: u64 },

    /// The request would exceed a configured memory or size cap.
    #[error("resource limit: {0}")]
    Resource(String),

    #[error("unsupported modulus {modulus}: {reason}")]
    UnsupportedModulus { modulus: u64, reason: &'static str },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("pole at s = 1")]
    Pole,

    #[error("unsupported argument: {0}")]
    Unsupported(String),

    /// A numerically checked identity did not hold at the stated tolerance.
    #[error("identity violated: {0}")]
    IdentityViolation(String),
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}
