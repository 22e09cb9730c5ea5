//! Command-line front end: state and energy tables, the verification suite
//! and the six-panel wavefunction/energy figure.

pub mod commands;
pub mod config;
pub mod output;
pub mod report;
pub mod svg;

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{0}")]
    Engine(#[from] fracfact::Error),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{failed} of {total} verification checks failed")]
    VerificationFailed { failed: usize, total: usize },
}

impl CliError {
    /// 0 success, 1 verification failure, 2 invalid configuration, 3 I/O failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerificationFailed { .. } => 1,
            CliError::Config(_) | CliError::Engine(_) => 2,
            CliError::Io { .. } => 3,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
