use std::path::PathBuf;

use thiserror::Error;

/// Failures surfaced to the shell, each with a fixed exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("degenerate model: every p is 0 or 1, so the entry variance vanishes")]
    Degenerate,

    #[error("{0}; the Gaussian surrogate is disabled (engine = bernoulli)")]
    Budget(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("verification failed:\n{0}")]
    Verify(String),

    #[error("{0}")]
    Compute(hyperspectra::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verify(_) | CliError::Compute(_) => 1,
            CliError::Config(_) => 2,
            CliError::Degenerate => 3,
            CliError::Budget(_) => 4,
            CliError::Io { .. } => 5,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

impl From<hyperspectra::Error> for CliError {
    fn from(e: hyperspectra::Error) -> Self {
        use hyperspectra::Error as E;
        match e {
            E::Degenerate => CliError::Degenerate,
            E::InvalidParams(_) | E::Domain(_) | E::Parse { .. } | E::TooLarge { .. } | E::UnsupportedArity { .. } => {
                CliError::Config(e.to_string())
            }
            other => CliError::Compute(other),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
