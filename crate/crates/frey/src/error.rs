use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] frey_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("network: {0}")]
    Network(String),
    #[error("missing data for levels: {}", .0.join(", "))]
    MissingData(Vec<String>),
    #[error("completeness bound {have} of {label} is below the required {need}")]
    Incomplete { label: String, have: u64, need: u64 },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("{0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn io_err(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Error {
    let path = path.into();
    move |source| Error::Io { path, source }
}
