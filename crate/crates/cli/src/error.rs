use std::process::ExitCode;

use thiserror::Error;

/// Failures of a CLI run, each tied to a documented exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("verification failed: {0}")]
    Violation(String),

    #[error("{0}")]
    BitCap(String),

    #[error("{0}")]
    Precision(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Violation(_) => 1,
            CliError::Usage(_) | CliError::Io(_) | CliError::Csv(_) => 2,
            CliError::BitCap(_) => 3,
            CliError::Precision(_) => 4,
        })
    }
}

impl From<esequence::Error> for CliError {
    fn from(e: esequence::Error) -> Self {
        match e {
            esequence::Error::BitCapExceeded { .. } => CliError::BitCap(e.to_string()),
            esequence::Error::DepthExhausted { .. } => CliError::Precision(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}

pub type CliResult<T> = Result<T, CliError>;
