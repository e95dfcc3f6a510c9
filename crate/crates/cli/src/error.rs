use std::path::PathBuf;

use thiserror::Error;

/// Failures of a CLI run, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Invalid configuration or command line value.
    #[error("config error: field `{field}`: {message}")]
    Config { field: String, message: String },

    /// Malformed input data.
    #[error("parse error in {path}: line {line}: {message}")]
    Parse { path: PathBuf, line: u64, message: String },

    #[error("numeric failure: {0}")]
    Numeric(#[from] smoothcal::Error),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Config { field: field.into(), message: message.into() }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io { path: path.into(), source }
    }

    /// 2 for configuration and input errors, 3 for numeric failures, 4 for I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Config { .. } | Self::Parse { .. } => 2,
            Self::Numeric(_) => 3,
            Self::Io { .. } => 4,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
