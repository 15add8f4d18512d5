//! Error type for curve, cycle, period, kernel and chart construction.

use thiserror::Error;

/// Failures of the hyperelliptic pipeline.
#[derive(Debug, Error)]
pub enum SwError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("singular curve: {0}")]
    SingularCurve(String),
    #[error("cycle construction failed: {0}")]
    CycleConstructionFailed(String),
    #[error("quadrature did not converge after {nodes} nodes (last change {change:e})")]
    QuadratureNotConverged { nodes: usize, change: f64 },
    #[error("Bergman normalization solve failed: {0}")]
    NormalizationSolveFailed(String),
    #[error("curve is outside the chart neighbourhood at {label}: |F| = {value:e} exceeds {bound:e}")]
    OutOfNeighbourhood { label: String, value: f64, bound: f64 },
    #[error("coefficient extraction did not converge: {0}")]
    ExtractionNotConverged(String),
    #[error(transparent)]
    Series(#[from] laurent_core::SeriesError),
    #[error(transparent)]
    Airy(#[from] airy_engine::AiryError),
}
