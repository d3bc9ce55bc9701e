use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library. The CLI maps each variant family to an
/// exit status through [`Error::kind`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("community {cluster} has a single node, its within-community probability is undefined")]
    DegenerateCluster { cluster: usize },

    #[error("bootstrap spread of the {side} eigenvalue is zero")]
    DegenerateBootstrap { side: &'static str },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// Coarse error families used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Parameter,
    Io,
    Numeric,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Parameter(_) | Error::DegenerateCluster { .. } | Error::Json(_) => {
                ErrorKind::Parameter
            }
            Error::Parse { .. } | Error::Io { .. } => ErrorKind::Io,
            Error::Numeric(_) | Error::DegenerateBootstrap { .. } => ErrorKind::Numeric,
        }
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
