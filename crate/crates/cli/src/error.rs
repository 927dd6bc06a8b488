use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("fixture: {0}")]
    Fixture(String),
    #[error("{0}")]
    Runtime(String),
    #[error("schema mismatch: {0}")]
    Schema(String),
}

impl CliError {
    /// 1 for bad input (config or run directories), 2 for fixtures, 3 for
    /// failures during a computation.
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Config(_) | CliError::Schema(_) => ExitCode::from(1),
            CliError::Fixture(_) => ExitCode::from(2),
            CliError::Runtime(_) => ExitCode::from(3),
        }
    }
}

impl From<ceo_adapt::Error> for CliError {
    fn from(e: ceo_adapt::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
