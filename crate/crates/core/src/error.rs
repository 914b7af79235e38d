use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid data: {0}")]
    InvalidData(String),

    /// A cluster whose weighted scatter is zero or whose weights vanish, so
    /// its scale parameter cannot be made positive.
    #[error("degenerate cluster {cluster}: {reason}")]
    DegenerateCluster { cluster: usize, reason: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("bisection did not converge within {iterations} iterations, bracket [{lo}, {hi}]")]
    Bisection { lo: f64, hi: f64, iterations: usize },

    #[error("membership solve failed at point {point}, cluster {cluster}: {source}")]
    Membership {
        point: usize,
        cluster: usize,
        #[source]
        source: Box<Error>,
    },

    /// Every cluster was eliminated, or none survived stale-row pruning.
    #[error("degenerate run after {iterations} iterations: {reason}")]
    DegenerateRun { iterations: usize, reason: String },

    #[error("{path}: row {row}, column {column}: {message}")]
    Csv {
        path: PathBuf,
        row: usize,
        column: usize,
        message: String,
    },

    #[error("unknown algorithm `{0}`")]
    UnknownAlgorithm(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Configuration and I/O problems, as opposed to failures inside a run.
    pub fn is_setup_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidConfig(_)
                | Error::InvalidData(_)
                | Error::Csv { .. }
                | Error::Io { .. }
                | Error::Json(_)
                | Error::UnknownAlgorithm(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
