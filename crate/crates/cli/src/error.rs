use std::path::PathBuf;

use aq_core::fock::FockError;
use aq_core::ring::ChartError;
use aq_core::star::StarError;
use aq_core::symplectic::SymplecticError;
use aq_core::AlgebroidError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {msg}")]
    Json { path: PathBuf, line: usize, column: usize, msg: String },
    #[error("{field}: {msg}")]
    Expr { field: String, column: usize, msg: String },
    #[error("{0}")]
    Chart(#[from] ChartError),
    #[error("{0}")]
    Index(String),
    #[error("{0}")]
    Algebroid(#[from] AlgebroidError),
    #[error("{0}")]
    Symplectic(#[from] SymplecticError),
    #[error("{0}")]
    Star(StarError),
    #[error("{0}")]
    Fock(FockError),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write report: {0}")]
    Report(String),
}

impl From<StarError> for CliError {
    fn from(e: StarError) -> Self {
        match e {
            StarError::Fock(f) => CliError::Fock(f),
            other => CliError::Star(other),
        }
    }
}

impl From<FockError> for CliError {
    fn from(e: FockError) -> Self {
        CliError::Fock(e)
    }
}

impl CliError {
    /// 2 for bad input, 3 when a numeric iteration did not converge.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Fock(FockError::MaxIterExceeded { .. } | FockError::QuadratureNotConverged { .. })
            | CliError::Star(StarError::ExtrapolationNotConverged { .. }) => 3,
            _ => 2,
        }
    }
}
