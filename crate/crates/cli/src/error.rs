use std::path::PathBuf;

use thiserror::Error;
use vispart_core::{DimensionError, GeometryError, IfsError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}:{line}:{column}: parse error: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid scene: {}", .0.join("; "))]
    Validation(Vec<String>),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Ifs(#[from] IfsError),
    #[error(transparent)]
    Dimension(#[from] DimensionError),
    #[error("{0}")]
    Render(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        CliError::Validation(vec![msg.into()])
    }
}
