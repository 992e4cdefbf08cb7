use std::path::PathBuf;

/// Everything that ends a run with exit status 1.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] qbalance_core::Error),
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed scenario: {0}")]
    Scenario(#[from] serde_json::Error),
    #[error("{0}")]
    Input(String),
}

pub type CliResult<T> = Result<T, CliError>;
