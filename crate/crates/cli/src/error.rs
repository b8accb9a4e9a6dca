use std::path::{Path, PathBuf};

use commchar_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Input { path: PathBuf, source: CoreError },
    #[error("{0}")]
    Computation(CoreError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("cannot write {}: {source}", path.display())]
    Output {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input { .. } | CliError::Computation(_) | CliError::Output { .. } => 1,
            CliError::Config(_) => 2,
            CliError::Invariant(_) => 3,
        }
    }

    pub(crate) fn reading(path: &Path) -> impl FnOnce(CoreError) -> CliError + '_ {
        move |source| match source {
            CoreError::InvalidParameter(m) => CliError::Config(m),
            CoreError::Invariant(m) => CliError::Invariant(m),
            source => CliError::Input {
                path: path.to_owned(),
                source,
            },
        }
    }

    pub(crate) fn writing(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
        move |source| CliError::Output {
            path: path.to_owned(),
            source,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidParameter(m) => CliError::Config(m),
            CoreError::Invariant(m) => CliError::Invariant(m),
            e => CliError::Computation(e),
        }
    }
}
