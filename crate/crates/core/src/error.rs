use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("series too short: need at least {needed} values, got {got}")]
    SeriesTooShort { needed: usize, got: usize },

    #[error("all lagged predictors are zero; the least-squares denominator vanishes")]
    ZeroPredictors,

    #[error("degenerate path: the quadratic-variation denominator is zero")]
    DegeneratePath,

    #[error("optimizer did not converge: {0}")]
    NonConvergence(String),

    #[error("stationary asymptotic variance is undefined for alpha = {0} (requires alpha < 1)")]
    NonStationary(f64),

    #[error("{path}: row {row}: {message}")]
    Parse {
        path: PathBuf,
        row: usize,
        message: String,
    },

    #[error("{0}: no data rows")]
    EmptyData(PathBuf),

    #[error("critical-value table mismatch: {0}")]
    ProvenanceMismatch(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

/// Broad failure classes, used for process exit codes and FFI status codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Data,
    Numerical,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidParameter(_) | Error::ProvenanceMismatch(_) => ErrorKind::Usage,
            Error::SeriesTooShort { .. }
            | Error::Parse { .. }
            | Error::EmptyData(_)
            | Error::Io { .. }
            | Error::Json { .. }
            | Error::Csv(_) => ErrorKind::Data,
            Error::ZeroPredictors
            | Error::DegeneratePath
            | Error::NonConvergence(_)
            | Error::NonStationary(_) => ErrorKind::Numerical,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
