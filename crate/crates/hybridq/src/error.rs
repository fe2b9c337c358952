use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] hybridq_core::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parameter file line {line}: {msg}")]
    Params { line: usize, msg: String },
    #[error("config: {0}")]
    Config(String),
    #[error("gate file: {0}")]
    GateFile(String),
    #[error("csv: {0}")]
    Csv(String),
    #[error("plot grid: {0}")]
    Grid(String),
    #[error("{0}")]
    Assertion(String),
}

impl Error {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io { path: path.display().to_string(), source }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
