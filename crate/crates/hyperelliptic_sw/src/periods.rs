//! Periods of `dS`, normalized holomorphic differentials and the period matrix.

use nalgebra::DMatrix;

use laurent_core::C64;

use crate::contour::{integrate_path, QuadOptions};
use crate::curve::SWCurve;
use crate::cycles::CycleBasis;
use crate::error::SwError;

/// Periods of a curve with respect to a cycle basis.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodData {
    /// `a^i = ∮_{A_i} dS`.
    pub a: Vec<C64>,
    /// `b_i = ∮_{B_i} dS`.
    pub b: Vec<C64>,
    /// `τ_ij = ∮_{B_j} ω_i`.
    pub tau: DMatrix<C64>,
    /// `ω_i = Σ_j N_ij z^{j-1} dz / y`.
    pub norm_matrix: DMatrix<C64>,
    /// `∮_{A_l} z^{j-1} dz / y` at `(l, j)`.
    pub hol_a: DMatrix<C64>,
    /// `∮_{B_l} z^{j-1} dz / y` at `(l, j)`.
    pub hol_b: DMatrix<C64>,
    /// Largest number of quadrature nodes used on one loop.
    pub max_nodes: usize,
}

impl PeriodData {
    /// `max |τ_ij - τ_ji|`.
    pub fn tau_asymmetry(&self) -> f64 {
        (&self.tau - self.tau.transpose()).iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    /// `dz` coefficients of the normalized differentials `ω_i` at `(z, y)`.
    pub fn omega(&self, curve: &SWCurve, z: C64, y: C64) -> Vec<C64> {
        let v = curve.holomorphic(z, y);
        (0..v.len()).map(|i| (0..v.len()).map(|j| self.norm_matrix[(i, j)] * v[j]).sum()).collect()
    }
}

/// Periods with the default quadrature options.
pub fn periods(curve: &SWCurve, cyc: &CycleBasis) -> Result<PeriodData, SwError> {
    periods_with(curve, cyc, &QuadOptions::default())
}

/// Integrates `dS` and `z^{j-1} dz / y` over every loop and assembles the periods.
///
/// The loops of `cyc` may belong to a nearby reference curve; the sheet at the
/// start of each loop is the root closest to the stored reference value.
pub fn periods_with(curve: &SWCurve, cyc: &CycleBasis, opts: &QuadOptions) -> Result<PeriodData, SwError> {
    let g = curve.genus();
    if cyc.genus() != g {
        return Err(SwError::InvalidInput(format!("cycle basis of genus {} for a genus {g} curve", cyc.genus())));
    }
    let f = |z: C64, y: C64, out: &mut [C64]| {
        out[0] = curve.ds(z, y);
        let v = curve.holomorphic(z, y);
        out[1..].copy_from_slice(&v);
    };
    let mut per_loop = Vec::with_capacity(cyc.loops.len());
    let mut max_nodes = 0;
    for l in &cyc.loops {
        let r = integrate_path(curve, l, g + 1, &f, opts)?;
        max_nodes = max_nodes.max(r.nodes);
        per_loop.push(r.values);
    }
    let (ap, bp) = cyc.combine(&per_loop);
    let a = ap.iter().map(|v| v[0]).collect();
    let b = bp.iter().map(|v| v[0]).collect();
    let hol_a = DMatrix::from_fn(g, g, |l, j| ap[l][j + 1]);
    let hol_b = DMatrix::from_fn(g, g, |l, j| bp[l][j + 1]);
    let norm_matrix = hol_a
        .transpose()
        .try_inverse()
        .ok_or_else(|| SwError::NormalizationSolveFailed("A-period matrix of the holomorphic differentials is singular".into()))?;
    let tau = &norm_matrix * hol_b.transpose();
    Ok(PeriodData { a, b, tau, norm_matrix, hol_a, hol_b, max_nodes })
}
