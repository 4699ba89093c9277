use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid degree: {0}")]
    InvalidDegree(String),

    #[error("degree mismatch: expected {expected}, got {found}")]
    DegreeMismatch { expected: String, found: String },

    #[error("Courant number {courant:.6} exceeds limit {limit} ({location})")]
    Courant {
        courant: f64,
        limit: f64,
        location: String,
    },

    #[error("non-finite value at {0}")]
    NonFinite(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("cannot fit a convergence slope: {0}")]
    Slope(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed input in {path}: {reason}")]
    Parse { path: PathBuf, reason: String },
}

impl Error {
    /// Whether this error signals a numerical failure (unstable step, NaN).
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Courant { .. } | Error::NonFinite(_))
    }

    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. })
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
