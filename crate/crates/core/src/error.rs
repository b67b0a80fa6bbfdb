//! Crate-wide error type.

use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("failed to parse {path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("invalid group data: {0}")]
    InvalidGroup(String),

    #[error("invalid subgroup: {0}")]
    InvalidSubgroup(String),

    #[error("group order {order} exceeds the configured bound {bound}")]
    OrderBound { order: usize, bound: usize },

    #[error("invalid irrep model: {0}")]
    InvalidIrrep(String),

    #[error("invalid weight table: {0}")]
    InvalidWeights(String),

    #[error("invalid bundle: {0}")]
    InvalidBundle(String),

    #[error("root number record rejected: {0}")]
    RootNumber(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("offline: {0}")]
    Offline(String),

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("verification failed: {0}")]
    Verification(String),
}

impl Error {
    /// True for malformed inputs and I/O trouble, false for mathematical
    /// failures found in otherwise well-formed data.  The CLI maps the former
    /// to exit code 2 and the latter to exit code 1.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Numeric(_) | Error::Verification(_))
    }
}

pub(crate) fn read_to_string(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

pub(crate) fn parse_json<T: serde::de::DeserializeOwned>(
    path: &std::path::Path,
    text: &str,
) -> Result<T> {
    serde_json::from_str(text).map_err(|source| Error::Json {
        path: path.to_owned(),
        source,
    })
}
