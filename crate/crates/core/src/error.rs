use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the optimizer, the benchmark suite and the harness.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid parameters, unknown identifiers or inconsistent dimensions.
    #[error("configuration error: {0}")]
    Config(String),

    /// A caller broke an operator precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    /// An argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The objective returned NaN or an infinity.
    #[error("objective returned non-finite value {value} at {position:?}")]
    Evaluation { position: Vec<f64>, value: f64 },

    #[error("evaluation budget exceeded: {nfc} calls made, hard limit {limit}")]
    BudgetExceeded { nfc: u64, limit: u64 },

    /// A requested experiment cell or file is not present.
    #[error("lookup error: {0}")]
    Lookup(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed file {path}: {message}")]
    Parse { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors that stem from user input rather than a runtime fault.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Config(_) | Error::Lookup(_) | Error::Parse { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
