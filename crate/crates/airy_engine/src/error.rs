//! Error type for the Airy structure engine.

use laurent_core::SeriesError;
use thiserror::Error;

/// Failures raised by tensor construction, gauge transformations and the recursion.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AiryError {
    /// A contraction needs mode indices beyond the configured bound.
    #[error("index bound {kmax} is too small: {needed} is required")]
    TruncationInsufficient { needed: u32, kmax: u32 },
    /// A gauge triple failed validation.
    #[error("invalid gauge: {0}")]
    InvalidGauge(String),
    /// A disc whose `y` has vanishing linear coefficient.
    #[error("degenerate disc: the linear coefficient of y vanishes")]
    DegenerateDisc,
    /// A per-label series of a W element carries a residue.
    #[error("series at label {alpha} is not residue-free")]
    NotResidueFree { alpha: usize },
    /// Inputs refer to incompatible label sets or index bounds.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    /// Failure inside the series layer.
    #[error(transparent)]
    Series(#[from] SeriesError),
}
