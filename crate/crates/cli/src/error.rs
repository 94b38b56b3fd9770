use std::path::{Path, PathBuf};

/// Exit status for configuration, input and I/O failures.
pub const EXIT_FATAL: i32 = 1;
/// Exit status when the data fail an analysis precondition.
pub const EXIT_PRECONDITION: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("input: {0}")]
    Input(String),
    #[error("{0}")]
    MissingOutput(String),
    #[error("{context}: [{}] {source}", source.code())]
    Analysis {
        context: &'static str,
        #[source]
        source: tsphen_core::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Analysis { .. } => EXIT_PRECONDITION,
            _ => EXIT_FATAL,
        }
    }

    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub(crate) fn analysis(context: &'static str) -> impl FnOnce(tsphen_core::Error) -> Self {
        move |source| CliError::Analysis { context, source }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
