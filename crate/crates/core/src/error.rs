use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error)]
pub enum SepError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A value is outside the domain an operation accepts (negative weight,
    /// `k <= 1`, edgeless graph, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A tree edit or tree-consuming operation was handed a tree that does
    /// not satisfy its structural precondition.
    #[error("structural error: {0}")]
    Structural(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

impl SepError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        SepError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        SepError::Domain(msg.into())
    }

    pub(crate) fn structural(msg: impl Into<String>) -> Self {
        SepError::Structural(msg.into())
    }

    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        SepError::Shape(msg.into())
    }
}

pub type Result<T, E = SepError> = std::result::Result<T, E>;
