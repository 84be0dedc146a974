use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the k-search library.
#[derive(Debug, Error)]
pub enum Error {
    /// Arguments violate a structural precondition (lengths, bounds, budgets).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A scalar parameter is outside the domain where the formula is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A threshold construction failed its own robustness/consistency certificate.
    /// This never fires on valid inputs and indicates a bug.
    #[error("construction error: {0}")]
    Construction(String),

    /// Malformed price data.
    #[error("parse error at row {row}: {message}")]
    Parse { row: u64, message: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
