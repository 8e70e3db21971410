use thiserror::Error;

/// Errors raised by depthlab operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested size exceeds a configured computational cap.
    #[error("resource limit: {what} = {requested} exceeds cap {cap}")]
    Resource {
        what: &'static str,
        requested: usize,
        cap: usize,
    },

    /// Input could not be interpreted (malformed permutation, empty sample, ...).
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

macro_rules! domain {
    ($($arg:tt)*) => {
        $crate::error::Error::Domain(format!($($arg)*))
    };
}
pub(crate) use domain;
