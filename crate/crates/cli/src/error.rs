use std::path::PathBuf;

use thiserror::Error;

/// Exit code for usage errors: unknown flags or invalid flag values.
pub const EXIT_USAGE: i32 = 1;
/// Exit code for input validation errors.
pub const EXIT_VALIDATION: i32 = 2;
/// Exit code for I/O failures.
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Args(#[from] clap::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Validation(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Scoring(#[from] mrgleu::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Args(e) if !e.use_stderr() => 0,
            CliError::Args(_) | CliError::Usage(_) => EXIT_USAGE,
            CliError::Validation(_) | CliError::Scoring(_) => EXIT_VALIDATION,
            CliError::Io { .. } => EXIT_IO,
        }
    }
}
