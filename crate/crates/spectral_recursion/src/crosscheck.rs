//! Comparison of the abstract recursion on gauge-transformed Airy tensors with the local recursion.

use nalgebra::DMatrix;
use serde::Serialize;

use airy_engine::{atr_run, gauge_transform, AiryTensors, GaugeData, SgnTable};
use laurent_core::C64;

use crate::curve::LocalSpectralCurve;
use crate::eo::eo_run;
use crate::error::SpectralError;

/// Tolerance for `c = d = identity` in a Bergman-type gauge.
pub const BERGMAN_GAUGE_TOL: f64 = 1e-12;

/// Result of [`atr_eo_crosscheck`].
#[derive(Debug, Clone)]
pub struct Crosscheck {
    /// Componentwise `max |S^ATR - S^EO|` over every computed cell.
    pub max_abs_deviation: f64,
    pub atr: SgnTable,
    pub eo: SgnTable,
}

/// Serializable summary of a [`Crosscheck`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrosscheckSummary {
    pub chi_max: u32,
    pub labels: usize,
    pub max_abs_deviation: f64,
}

/// Runs the abstract recursion on `gauge_transform(t, g)` and the local
/// recursion on the curve whose Bergman regular part is `g.s`, and compares
/// the two tables.
///
/// The gauge must be of Bergman type: `c = d = identity`, so that the `ē`
/// basis is `e^k + Σ s^{k j} f_j`.
pub fn atr_eo_crosscheck(t: &AiryTensors, g: &GaugeData, chi_max: u32) -> Result<Crosscheck, SpectralError> {
    let n = g.dim();
    let id = DMatrix::<C64>::identity(n, n);
    let dev = (&g.c - &id).iter().chain((&g.d - &id).iter()).map(|x| x.norm()).fold(0.0, f64::max);
    if dev > BERGMAN_GAUGE_TOL {
        return Err(SpectralError::NotBergmanGauge(format!("c and d differ from the identity by {dev:e}")));
    }
    let transformed = gauge_transform(t, g)?;
    let atr = atr_run(&transformed, chi_max)?;
    let curve = LocalSpectralCurve::with_s(g.ram.clone(), g.kmax, g.s.clone())?;
    let eo = eo_run(&curve, chi_max)?.table().clone();
    let max_abs_deviation = atr.max_abs_difference(&eo);
    Ok(Crosscheck { max_abs_deviation, atr, eo })
}
