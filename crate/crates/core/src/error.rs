use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("valuation of zero is infinite")]
    InfiniteValuation,

    #[error("curve has bad reduction at {t}")]
    BadReduction { t: u64 },

    #[error("calibration violated at t = {t}: {detail}")]
    CalibrationViolation { t: u64, detail: String },

    #[error("form {label}: coefficient a_{n} requested but only {available} stored")]
    MissingCoefficient {
        label: String,
        n: usize,
        available: usize,
    },

    #[error("newform data unavailable: {0}")]
    Unavailable(String),

    #[error("malformed newform payload, field `{field}`: {detail}")]
    Parse { field: String, detail: String },

    #[error("form {label} violates invariant `{invariant}`")]
    InvariantViolation { label: String, invariant: String },

    #[error("no cache file at {}", .0.display())]
    MissingFile(PathBuf),

    #[error("method inapplicable to q = {q}: {reason}")]
    MethodInapplicable { q: u64, reason: String },

    #[error("oracle disagreement: {0}")]
    OracleDisagreement(String),

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("HTTP error: {0}")]
    Http(String),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
