use std::path::PathBuf;

use gyrostat_core::Error as CoreError;
use thiserror::Error;

pub type ShellResult<T> = std::result::Result<T, ShellError>;

#[derive(Debug, Error)]
pub enum ShellError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid scenario: {0}")]
    Validation(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("unknown preset {name:?}; available: {}", available.join(", "))]
    UnknownPreset { name: String, available: Vec<String> },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
}

impl ShellError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        ShellError::Io { path: path.into(), source }
    }

    /// Process exit code: 1 validation, 2 runtime, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            ShellError::Parse { .. } | ShellError::Validation(_) | ShellError::UnknownPreset { .. } => 1,
            ShellError::Core(e) => match e {
                CoreError::InvalidCavity(_)
                | CoreError::OrderViolation { .. }
                | CoreError::SolidInertiaNonpositive { .. }
                | CoreError::NotPermanentAxis(_)
                | CoreError::UnknownEigenvalue(_)
                | CoreError::InvalidParameter(_) => 1,
                CoreError::SolverFailure { .. }
                | CoreError::CflViolation { .. }
                | CoreError::NonFinite { .. }
                | CoreError::NoConvergence { .. }
                | CoreError::ClusterAmbiguous { .. }
                | CoreError::WindowEmpty => 2,
            },
            ShellError::Io { .. } | ShellError::Format { .. } => 3,
        }
    }
}
