use std::io;
use std::path::PathBuf;

use thiserror::Error;

use crate::parse::FileError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    File(#[from] FileError),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(#[from] ncx_core::Error),
    #[error("cannot write plot {path}: {source}")]
    Plot { path: PathBuf, source: io::Error },
}

impl CliError {
    /// 1 for failures of the computation itself, 2 for bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(ncx_core::Error::Validation(_)) => 2,
            CliError::Domain(_) | CliError::Plot { .. } => 1,
            CliError::File(_) | CliError::Read { .. } | CliError::Usage(_) => 2,
        }
    }
}

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}
