use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate distribution: {0}")]
    DegenerateDistribution(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("impossible observation: location {location}, {visibility} has zero probability under the current belief")]
    ImpossibleObservation {
        location: usize,
        visibility: &'static str,
    },

    #[error("invalid config: {0}")]
    Config(String),

    #[error("failed to parse {path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{failed} of {total} episodes failed: {messages:?}")]
    Suite {
        failed: usize,
        total: usize,
        messages: Vec<String>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
