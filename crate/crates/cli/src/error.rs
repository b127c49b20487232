use std::path::PathBuf;
use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] fuzzyci_core::Error),

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error("writing output: {0}")]
    Write(#[from] std::io::Error),

    #[error("writing csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("writing json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("recipe {}: {source}", path.display())]
    Recipe { path: PathBuf, source: toml::de::Error },

    /// A verification the command performs itself did not pass.
    #[error("{0}")]
    Check(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    /// 2 for invalid input, 3 for numerical non-convergence, 1 otherwise.
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) | CliError::Recipe { .. } => ExitCode::from(2),
            CliError::Core(e) if e.is_numerical() => ExitCode::from(3),
            CliError::Core(_) => ExitCode::from(2),
            _ => ExitCode::from(1),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
