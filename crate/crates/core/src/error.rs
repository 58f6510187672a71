use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A configuration value violates its constraint. `field` names the
    /// offending key as it appears in the JSON config.
    #[error("invalid `{field}`: {message}")]
    Config {
        field: &'static str,
        message: String,
    },

    #[error("trajectory of {n_modes} modes x {columns} columns is too large to allocate")]
    Sizing { n_modes: usize, columns: usize },

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("data integrity: {0}")]
    Data(String),

    /// J = 0: every left-endpoint displacement is zero, so the ratio B/J
    /// is undefined.
    #[error("degenerate data: J = 0, the estimator is undefined")]
    Degenerate,

    #[error("trajectory carries no noise increments (dw); xi is unavailable")]
    MissingNoise,

    #[error("true lambda was not supplied")]
    MissingTruth,

    #[error("replication with seed {seed:#018x} failed: {source}")]
    Replication {
        seed: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: malformed file: {message}")]
    Format { path: PathBuf, message: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(field: &'static str, message: impl Into<String>) -> Self {
        Error::Config {
            field,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
            message: message.into(),
        }
    }
}
