//! The normalized Bergman kernel: an algebraic base bidifferential plus a
//! holomorphic correction that removes its A-periods.

use nalgebra::DMatrix;

use laurent_core::C64;

use crate::contour::{integrate_path, QuadOptions};
use crate::curve::{min_pairwise_distance, SWCurve};
use crate::cycles::CycleBasis;
use crate::error::SwError;
use crate::periods::PeriodData;

/// Relative residual above which the correction fit is rejected.
pub const FIT_RESIDUAL_TOL: f64 = 1e-8;

/// Normalized kernel `B = B_0 - Σ C_ij v_i ⊗ v_j` with `v_i = z^{i-1} dz / y`.
#[derive(Debug, Clone, PartialEq)]
pub struct BergmanData {
    curve: SWCurve,
    correction: DMatrix<C64>,
    norm_matrix: DMatrix<C64>,
    correction_asymmetry: f64,
    fit_residual: f64,
}

/// Point on the curve as `(z, y)`.
pub type CurvePoint = (C64, C64);

impl BergmanData {
    /// The curve.
    pub fn curve(&self) -> &SWCurve {
        &self.curve
    }

    /// Coefficients `C_ij` of the holomorphic correction (symmetrized).
    pub fn correction_matrix(&self) -> &DMatrix<C64> {
        &self.correction
    }

    /// Change of basis from `z^{j-1} dz / y` to the normalized differentials.
    pub fn norm_matrix(&self) -> &DMatrix<C64> {
        &self.norm_matrix
    }

    /// `max |C_ij - C_ji|` before symmetrization.
    pub fn correction_asymmetry(&self) -> f64 {
        self.correction_asymmetry
    }

    /// Relative residual of the least-squares fit of the A-periods of `B_0`.
    pub fn fit_residual(&self) -> f64 {
        self.fit_residual
    }

    /// `dz_1 dz_2` coefficient of the base bidifferential
    /// `(2 y_1 y_2 + F(z_1, z_2)) / (4 (z_1 - z_2)^2 y_1 y_2)`, with
    /// `F(x_1, x_2) = Σ_k (x_1 x_2)^k (2 λ_{2k} + λ_{2k+1} (x_1 + x_2))` built
    /// from the coefficients `λ` of `y^2`.
    pub fn base(&self, p: CurvePoint, q: CurvePoint) -> C64 {
        base_kernel(&self.curve, p, q)
    }

    /// `dz_1 dz_2` coefficient of the normalized kernel.
    pub fn eval(&self, p: CurvePoint, q: CurvePoint) -> C64 {
        let vp = self.curve.holomorphic(p.0, p.1);
        let vq = self.curve.holomorphic(q.0, q.1);
        let mut corr = C64::new(0.0, 0.0);
        for i in 0..vp.len() {
            for j in 0..vq.len() {
                corr += self.correction[(i, j)] * vp[i] * vq[j];
            }
        }
        base_kernel(&self.curve, p, q) - corr
    }

    /// `dz` coefficients of the normalized holomorphic differentials at `p`.
    pub fn omega(&self, p: CurvePoint) -> Vec<C64> {
        let v = self.curve.holomorphic(p.0, p.1);
        (0..v.len()).map(|i| (0..v.len()).map(|j| self.norm_matrix[(i, j)] * v[j]).sum()).collect()
    }
}

fn base_kernel(curve: &SWCurve, p: CurvePoint, q: CurvePoint) -> C64 {
    let (x1, y1) = p;
    let (x2, y2) = q;
    let lam = curve.q_coeffs();
    let at = |m: usize| lam.get(m).copied().unwrap_or(C64::new(0.0, 0.0));
    let x12 = x1 * x2;
    let sum = x1 + x2;
    let mut f = C64::new(0.0, 0.0);
    let mut pw = C64::new(1.0, 0.0);
    for k in 0..=curve.genus() + 1 {
        f += pw * (at(2 * k) * 2.0 + at(2 * k + 1) * sum);
        pw *= x12;
    }
    let d = x1 - x2;
    (y1 * y2 * 2.0 + f) / (d * d * y1 * y2 * 4.0)
}

/// Points on the curve far from every loop and branch point, used to fit the correction.
pub fn sample_points(curve: &SWCurve, cyc: &CycleBasis, count: usize) -> Vec<CurvePoint> {
    let bp = curve.branch_points();
    let centroid: C64 = bp.iter().sum::<C64>() / bp.len() as f64;
    let radius = bp.iter().map(|b| (b - centroid).norm()).fold(0.0, f64::max);
    let mut cands = Vec::new();
    for (ri, rho) in [0.35, 0.7, 1.1, 1.6].iter().enumerate() {
        for k in 0..12 {
            let phi = 0.37 * ri as f64 + std::f64::consts::PI * k as f64 / 6.0;
            let z = centroid + C64::from_polar(rho * radius, phi);
            let d = cyc.distance_to(z).min(bp.iter().map(|b| (b - z).norm()).fold(f64::INFINITY, f64::min));
            cands.push((d, z));
        }
    }
    cands.sort_by(|a, b| b.0.total_cmp(&a.0));
    // keep well separated candidates
    let mut out: Vec<C64> = Vec::new();
    let sep = 0.1 * min_pairwise_distance(bp);
    for (_, z) in cands {
        if out.iter().all(|w| (w - z).norm() > sep) {
            out.push(z);
        }
        if out.len() == count {
            break;
        }
    }
    out.into_iter().map(|z| (z, curve.q(z).sqrt())).collect()
}

/// Builds the normalized kernel: integrates `B_0(·, q_m)` over every A-cycle
/// at sample points `q_m`, fits the result in the span of `z^{j-1} dz / y`
/// and solves for the correction that cancels it.
pub fn bergman_kernel(curve: &SWCurve, cyc: &CycleBasis, pd: &PeriodData) -> Result<BergmanData, SwError> {
    let g = curve.genus();
    let samples = sample_points(curve, cyc, g + 2);
    let k = samples.len();
    if k < g {
        return Err(SwError::NormalizationSolveFailed("not enough sample points away from the cycles".into()));
    }
    let f = |z: C64, y: C64, out: &mut [C64]| {
        for (o, &q) in out.iter_mut().zip(&samples) {
            *o = base_kernel(curve, (z, y), q);
        }
    };
    let opts = QuadOptions::default();
    let mut per_loop = Vec::with_capacity(cyc.loops.len());
    for l in &cyc.loops {
        per_loop.push(integrate_path(curve, l, k, &f, &opts)?.values);
    }
    let (ap, _) = cyc.combine(&per_loop);
    let i_mat = DMatrix::from_fn(g, k, |l, m| ap[l][m]);
    let v_mat = DMatrix::from_fn(g, k, |j, m| curve.holomorphic(samples[m].0, samples[m].1)[j]);
    let gram = &v_mat * v_mat.adjoint();
    let gram_inv = gram
        .try_inverse()
        .ok_or_else(|| SwError::NormalizationSolveFailed("sample points do not separate the holomorphic differentials".into()))?;
    let m_mat = &i_mat * v_mat.adjoint() * gram_inv;
    let resid = (&m_mat * &v_mat - &i_mat).norm() / i_mat.norm().max(f64::MIN_POSITIVE);
    if resid > FIT_RESIDUAL_TOL {
        return Err(SwError::NormalizationSolveFailed(format!("A-periods of the base kernel are not holomorphic (residual {resid:e})")));
    }
    let a_inv = pd
        .hol_a
        .clone()
        .try_inverse()
        .ok_or_else(|| SwError::NormalizationSolveFailed("singular A-period matrix".into()))?;
    let c = a_inv * m_mat;
    let asym = (&c - c.transpose()).iter().map(|x| x.norm()).fold(0.0, f64::max);
    let correction = (&c + c.transpose()) * C64::new(0.5, 0.0);
    Ok(BergmanData {
        curve: curve.clone(),
        correction,
        norm_matrix: pd.norm_matrix.clone(),
        correction_asymmetry: asym,
        fit_residual: resid,
    })
}

/// A- and B-periods in the first slot of `B(·, q)` for each sample point `q`:
/// returns `(A[l][m], B[l][m])`.
pub fn kernel_periods(b: &BergmanData, cyc: &CycleBasis, qs: &[CurvePoint]) -> Result<(Vec<Vec<C64>>, Vec<Vec<C64>>), SwError> {
    let curve = b.curve();
    let f = |z: C64, y: C64, out: &mut [C64]| {
        for (o, &q) in out.iter_mut().zip(qs) {
            *o = b.eval((z, y), q);
        }
    };
    let opts = QuadOptions::default();
    let mut per_loop = Vec::with_capacity(cyc.loops.len());
    for l in &cyc.loops {
        per_loop.push(integrate_path(curve, l, qs.len(), &f, &opts)?.values);
    }
    Ok(cyc.combine(&per_loop))
}
