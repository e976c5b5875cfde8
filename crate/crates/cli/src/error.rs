use std::path::PathBuf;

use thiserror::Error;

/// Failures surfaced by the commands, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("{0}")]
    Invalid(String),

    #[error("{0}")]
    Uncontrollable(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Invalid(_) => 2,
            CliError::Uncontrollable(_) => 3,
            CliError::Io { .. } => 4,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

impl From<delayctl_core::Error> for CliError {
    fn from(e: delayctl_core::Error) -> Self {
        use delayctl_core::Error as E;
        match e {
            E::NotControllable { .. } | E::HorizonTooShort { .. } | E::SingularGramian { .. } => {
                CliError::Uncontrollable(e.to_string())
            }
            other => CliError::Invalid(other.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
