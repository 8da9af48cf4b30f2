use thiserror::Error;

use crate::config::ConfigError;

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_CONVERGENCE: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(#[from] ConfigError),

    #[error("numerical failure: {0}")]
    Numerical(#[from] casimir_core::Error),

    /// Output was written but some grid points did not converge.
    #[error("{failed} of {total} grid points did not converge")]
    PartialFailure { failed: usize, total: usize },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Numerical(_) | CliError::PartialFailure { .. } => EXIT_CONVERGENCE,
            CliError::Io { .. } => EXIT_IO,
        }
    }
}
