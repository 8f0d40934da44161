use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by the file formats and the CLI, each mapped to an exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("missing input: {}", .0.display())]
    MissingInput(PathBuf),
    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("format error in {}: {msg}", path.display())]
    Format { path: PathBuf, msg: String },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("numeric domain error: {0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::MissingInput(_) | CliError::Io { .. } | CliError::Format { .. } => 3,
            CliError::Numeric(_) => 4,
            CliError::Dimension(_) => 5,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        let path = path.into();
        if source.kind() == std::io::ErrorKind::NotFound {
            CliError::MissingInput(path)
        } else {
            CliError::Io { path, source }
        }
    }

    pub fn format(path: impl Into<PathBuf>, msg: impl Into<String>) -> Self {
        CliError::Format { path: path.into(), msg: msg.into() }
    }
}

impl From<anycam_core::Error> for CliError {
    fn from(e: anycam_core::Error) -> Self {
        use anycam_core::Error as E;
        match e {
            E::DimensionMismatch { .. } => CliError::Dimension(e.to_string()),
            E::MissingLut | E::LutNotApplicable(_) => CliError::Config(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
