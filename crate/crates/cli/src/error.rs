use thiserror::Error;

/// CLI failures, each mapped to a fixed process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("self-check failed: {0}")]
    SelfCheck(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::SelfCheck(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<vod_core::Error> for CliError {
    fn from(e: vod_core::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}
