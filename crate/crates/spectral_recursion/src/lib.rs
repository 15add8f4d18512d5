//! Local Eynard-Orantin topological recursion.
//!
//! A [`LocalSpectralCurve`] collects ramification points with involution
//! `z -> -z`, the odd part `D(z) dz` of `ω_{0,1}` and the regular part of the
//! Bergman kernel. [`eo_run`] produces `ω_{g,n}` as coefficient tensors in the
//! basis `ē^{k,α} = e^{k,α} + Σ s^{(k,α)(j,β)} f_{j,β}`, [`omega_eval`]
//! evaluates them at points, and [`atr_eo_crosscheck`] compares them with the
//! abstract recursion on gauge-transformed Airy tensors.

mod crosscheck;
mod curve;
mod eo;
mod error;
mod eval;

pub use crosscheck::{atr_eo_crosscheck, Crosscheck, CrosscheckSummary, BERGMAN_GAUGE_TOL};
pub use curve::{seeded_symmetric_s, LocalSpectralCurve, CURVE_SYMMETRY_TOL};
pub use eo::{eo_run, support_bound_check, CellSupport, OmegaGN, SupportReport};
pub use error::SpectralError;
pub use eval::omega_eval;
