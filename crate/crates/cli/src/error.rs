use stickel_core::Error;

/// Failures surfaced by the command line, each mapped to an exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad arguments, unusable conductors or primes, unwritable paths.
    #[error("{0}")]
    Input(String),
    /// A computed result failed a check.
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Verification(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Inconsistent(_)
            | Error::DependentRows
            | Error::NotInSpan
            | Error::SpansDiffer
            | Error::Dimension(_)
            | Error::TrivialCharacter => CliError::Verification(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(format!("i/o error: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Input(format!("csv error: {e}"))
    }
}
