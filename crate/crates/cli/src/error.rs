use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Validation(String),

    #[error(transparent)]
    Math(#[from] qtomo::Error),

    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    #[error("serialization error: {0}")]
    Serialize(#[from] serde_json::Error),

    #[error("self-check failed: {failed} of {total} invariants out of tolerance")]
    CheckFailed { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Math(qtomo::Error::InvalidDeformation(_))
            | CliError::Math(qtomo::Error::InvalidArgument(_)) => 2,
            CliError::Math(_) => 3,
            CliError::CheckFailed { .. } => 4,
            CliError::Io(_) | CliError::Serialize(_) => 1,
        }
    }
}
