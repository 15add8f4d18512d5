//! Error type of the verification pipeline and its mapping to exit codes.

use thiserror::Error;

/// Exit code for a run whose checks did not all pass.
pub const EXIT_CHECK_FAILED: i32 = 1;
/// Exit code for an unreadable or invalid configuration.
pub const EXIT_CONFIG: i32 = 2;

/// Failures of configuration handling and of the pipeline stages.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("table is in basis `{found}`, the contraction needs `bergman`")]
    BasisMismatch { found: String },
    #[error("contraction input mismatch: {0}")]
    ShapeMismatch(String),
    #[error("Newton inversion a -> u did not converge: residual {residual:e} after {iterations} iterations")]
    NewtonFailed { residual: f64, iterations: usize },
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Curve(#[from] hyperelliptic_sw::SwError),
    #[error(transparent)]
    Recursion(#[from] spectral_recursion::SpectralError),
    #[error(transparent)]
    Airy(#[from] airy_engine::AiryError),
}

impl CliError {
    /// Process exit code for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            _ => EXIT_CHECK_FAILED,
        }
    }
}
