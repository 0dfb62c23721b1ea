use std::path::PathBuf;

use casimir_core::CasimirError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// `--help` or `--version` output.
    #[error("{0}")]
    Help(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("{path}:{line}: {message}")]
    Table { path: PathBuf, line: usize, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Numeric(#[from] CasimirError),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    /// 0 success, 1 usage or I/O, 2 numerical non-convergence.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Help(_) => 0,
            CliError::Numeric(CasimirError::Convergence { .. }) => 2,
            _ => 1,
        }
    }
}
