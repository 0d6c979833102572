use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{}: {source}", path.display())]
    File { path: PathBuf, source: qaccred::Error },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Library(#[from] qaccred::Error),
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Inconclusive(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        let internal = |e: &qaccred::Error| matches!(e, qaccred::Error::Internal(_));
        ExitCode::from(match self {
            CliError::Inconclusive(_) => 2,
            CliError::File { source, .. } | CliError::Library(source) if internal(source) => 3,
            CliError::Csv(_) => 3,
            _ => 1,
        })
    }
}

pub type CliResult<T> = Result<T, CliError>;
