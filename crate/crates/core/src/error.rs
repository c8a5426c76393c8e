use thiserror::Error;

/// Errors raised by the engine.
///
/// The variants mirror the outcome classes the command-line driver maps onto
/// exit codes: malformed or mismatched input is `Structural`/`Parse`, a
/// mathematically invalid request is `Domain`, inputs outside what the
/// engine can enumerate are `Unsupported`, and exceeded limits are `Resource`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("structural error: {0}")]
    Structural(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("resource bound exceeded: {0}")]
    Resource(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

macro_rules! structural {
    ($($arg:tt)*) => { $crate::error::Error::Structural(format!($($arg)*)) };
}
macro_rules! domain {
    ($($arg:tt)*) => { $crate::error::Error::Domain(format!($($arg)*)) };
}
pub(crate) use domain;
pub(crate) use structural;
