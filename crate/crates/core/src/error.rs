use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A detector or sensor parameter violates its invariant.
    #[error("{reason}")]
    InvalidParam { field: &'static str, reason: String },

    #[error("point {index} has a non-finite coordinate ({x}, {y})")]
    NonFinitePoint { index: usize, x: f64, y: f64 },

    #[error("point cloud is empty")]
    EmptyCloud,

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("eigensolver did not converge within {iterations} iterations (n = {n})")]
    NoConvergence { n: usize, iterations: usize },

    #[error("unknown scenario `{0}` (expected one of: straight, L, T, X, five-way, dead-end)")]
    UnknownScenario(String),

    #[error(
        "exhaustive k-means is limited to n <= {max_n} and k <= {max_k}, got n = {n}, k = {k}"
    )]
    OracleTooLarge {
        n: usize,
        k: usize,
        max_n: usize,
        max_k: usize,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{0}: file contains no points")]
    EmptyFile(PathBuf),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("report serialization failed: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParam {
            field,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
