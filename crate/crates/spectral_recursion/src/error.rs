//! Error type for the local recursion.

use airy_engine::AiryError;
use laurent_core::SeriesError;
use thiserror::Error;

/// Failures raised by curve validation, the recursion and evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    /// The curve's index bound does not cover the requested cells.
    #[error("index bound {kmax} is too small: {needed} is required")]
    TruncationInsufficient { needed: u32, kmax: u32 },
    /// The curve data violate an invariant.
    #[error("invalid local spectral curve: {0}")]
    InvalidCurve(String),
    /// An evaluation point lies outside the trusted annulus.
    #[error("point {z} at label {alpha} lies outside the annulus {r_min} <= |z| <= {r_max}")]
    OutOfAnnulus { alpha: usize, z: String, r_min: f64, r_max: f64 },
    /// The gauge passed to the cross-check is not of Bergman type.
    #[error("gauge is not of Bergman type: {0}")]
    NotBergmanGauge(String),
    /// A cell outside the computed range was requested.
    #[error("cell ({g},{n}) was not computed")]
    MissingCell { g: u32, n: u32 },
    /// Failure inside the Airy engine.
    #[error(transparent)]
    Airy(#[from] AiryError),
    /// Failure inside the series layer.
    #[error(transparent)]
    Series(#[from] SeriesError),
}
