//! The global embedding `Φ = dS(Σ_0) - s^* dS(Σ(u))` in the standard
//! coordinates of the reference curve, and its decomposition into the
//! differentials `ē^{k,α}` and `ω_j`.
//!
//! Points of `Σ_0` and `Σ(u)` are identified along the leaves `P = const` on
//! the same sheet of `y`. Near the ramification point `z_i` this reads
//! `η^2 = P - P(z_i(u_0); u_0)` on both curves, so `y(η)` is common and
//! `Φ = (z_0(η) - z_u(η)) 2η dη / y(η)`.

use nalgebra::{DMatrix, DVector};

use airy_engine::{ModeIndex, WElement};
use laurent_core::{sqrt_shift_flow, LaurentSeries, SeriesDifferential, C64};

use crate::bergman::{BergmanData, CurvePoint};
use crate::charts::{check_neighbourhood, local_inverse, StandardChart};
use crate::curve::SWCurve;
use crate::error::SwError;
use crate::expansions::{EbarEvaluator, LocalExpansions};

/// Lowest exponent kept in the descending tail of `Φ`, relative to the chart order.
const TAIL_FACTOR: i32 = 1;

/// Product truncated at `hi`, treating the stored coefficients of both factors as exact.
///
/// The descending tail of `Φ` is cut at a finite exponent; its coefficients
/// decay like powers of `|ε|^{1/2}` over the chart radius, so the terms the cut
/// removes are below rounding for displacements inside the chart guard.
fn product_upto(a: &LaurentSeries, b: &LaurentSeries, hi: i32) -> LaurentSeries {
    let lo = a.min_exp() + b.min_exp();
    if hi < lo {
        return LaurentSeries::zero_until(hi);
    }
    let mut out = vec![C64::new(0.0, 0.0); (hi - lo + 1) as usize];
    for (ea, ca) in a.terms() {
        if ca.norm() == 0.0 {
            continue;
        }
        for (eb, cb) in b.terms() {
            let e = ea + eb;
            if e > hi {
                break;
            }
            out[(e - lo) as usize] += ca * cb;
        }
    }
    LaurentSeries::truncated(lo, out, hi)
}

/// `f(g(z))` truncated at `hi` for `g = c z + O(z^2)`, with the same convention as [`product_upto`].
fn compose_upto(f: &LaurentSeries, g: &LaurentSeries, hi: i32) -> Result<LaurentSeries, SwError> {
    let one = LaurentSeries::constant(C64::new(1.0, 0.0));
    let top = f.max_stored_exp().unwrap_or(0);
    let mut acc = LaurentSeries::zero_until(hi);
    let mut pw = one.clone();
    for n in 0..=top.max(0) {
        if n > 0 {
            pw = product_upto(&pw, g, hi);
        }
        acc = acc.linear_combination(C64::new(1.0, 0.0), &pw, f.coeff(n));
    }
    if f.min_exp() < 0 {
        let ginv = g.recip()?;
        let mut pw = one;
        for n in 1..=-f.min_exp() {
            pw = product_upto(&pw, &ginv, hi);
            acc = acc.linear_combination(C64::new(1.0, 0.0), &pw, f.coeff(-n));
        }
    }
    Ok(acc.with_trunc(hi))
}

/// `z_u(η) - z_i(u)` as a Laurent series in `η`, valid for `|η|^2 > |ε|`.
fn moved_inverse(c: &SWCurve, chart: &StandardChart, low_cut: i32) -> Result<(C64, LaurentSeries), SwError> {
    let zi0 = chart.point.z;
    let ziu = c.nearest_critical(zi0);
    let eps = c.p(ziu) - chart.point.p_value;
    let mut t_u = local_inverse(c.p_coeffs(), ziu, chart.order)?;
    let t0 = &chart.z_of_eta - &LaurentSeries::constant(zi0);
    if (t_u.coeff(1) - t0.coeff(1)).norm() > (t_u.coeff(1) + t0.coeff(1)).norm() {
        t_u = t_u.reflect();
    }
    let flowed = sqrt_shift_flow(&SeriesDifferential::new(t_u.shift(1)), -eps, low_cut + 1);
    Ok((ziu, flowed.base.shift(-1)))
}

/// Coefficient series of `Φ` in `η̄` at one chart.
pub fn embed_at_chart(c: &SWCurve, chart: &StandardChart) -> Result<LaurentSeries, SwError> {
    let n = chart.order;
    let low_cut = -TAIL_FACTOR * n;
    let (ziu, zu) = moved_inverse(c, chart, low_cut)?;
    let dz = &(&chart.z_of_eta - &zu) + &LaurentSeries::constant(-ziu);
    let inv_y = chart.y_of_eta.recip()?;
    let phi_eta = product_upto(&dz.shift(1).scale(C64::new(2.0, 0.0)), &inv_y, n).drop_below(low_cut);
    let eta = &chart.eta_of_etabar;
    let hi = eta.trunc_order().unwrap_or(n).min(n) - 1;
    let composed = compose_upto(&phi_eta, eta, hi)?;
    Ok(product_upto(&composed, &eta.derivative(), hi).drop_below(low_cut))
}

/// `Φ_{Σ_0}(Σ(u))` at every ramification point of the reference curve.
///
/// Fails with [`SwError::OutOfNeighbourhood`] when `c` is outside a chart's guard.
pub fn sw_embed_global(c: &SWCurve, reference: &SWCurve, charts: &[StandardChart]) -> Result<WElement, SwError> {
    if c.genus() != reference.genus() || charts.len() != reference.ram_points().len() {
        return Err(SwError::InvalidInput("charts do not match the curves".into()));
    }
    let mut parts = Vec::with_capacity(charts.len());
    for ch in charts {
        check_neighbourhood(ch, c)?;
        parts.push(SeriesDifferential::new(embed_at_chart(c, ch)?));
    }
    Ok(WElement::new(reference.ram_labels(), parts)?)
}

/// Coefficients of `ξ = Σ ξ_{α,k} ē^{k,α} + Σ a^j ω_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    /// `ξ_{α,k}` by flat mode index, for `k ≤ kmax` of the expansions.
    pub xi: Vec<C64>,
    /// `a^j`, the A-periods of the reconstruction.
    pub a: Vec<C64>,
    /// Largest principal coefficient beyond `kmax`, which is not represented.
    pub principal_tail: f64,
    /// Largest residual of the regular parts after the fit.
    pub residual: f64,
}

impl Decomposition {
    /// `dz` coefficient of the reconstruction at a point of the curve.
    pub fn eval(&self, ev: &EbarEvaluator<'_>, b: &BergmanData, p: CurvePoint) -> C64 {
        let mut e = vec![C64::new(0.0, 0.0); self.xi.len()];
        ev.eval_all(p, &mut e);
        let om = b.omega(p);
        e.iter().zip(&self.xi).map(|(x, y)| x * y).sum::<C64>() + om.iter().zip(&self.a).map(|(x, y)| x * y).sum::<C64>()
    }
}

/// Splits local data into principal parts, read off directly, and a holomorphic
/// part fitted by least squares to the regular coefficients `η̄^0 … η̄^{kmax-1}`
/// at every label.
#[allow(non_snake_case)]
pub fn decompose_in_G(w: &WElement, le: &LocalExpansions) -> Result<Decomposition, SwError> {
    let nr = le.ram().len();
    if w.ram() != le.ram() {
        return Err(SwError::InvalidInput("element and expansions use different labels".into()));
    }
    let kmax = le.kmax();
    let g = le.genus();
    let dim = kmax as usize * nr;
    let mut xi = vec![C64::new(0.0, 0.0); dim];
    let mut principal_tail: f64 = 0.0;
    for alpha in 0..nr {
        for (e, v) in w.part(alpha).base.terms() {
            if e <= -2 {
                let k = (-e - 1) as u32;
                if k <= kmax {
                    xi[ModeIndex::new(k, alpha).flat(nr)] = v;
                } else {
                    principal_tail = principal_tail.max(v.norm());
                }
            }
        }
    }
    let rows = dim;
    let mut m = DMatrix::from_element(rows, g, C64::new(0.0, 0.0));
    let mut rhs = DVector::from_element(rows, C64::new(0.0, 0.0));
    for beta in 0..nr {
        let base = &w.part(beta).base;
        for i in 1..=kmax {
            let row = ModeIndex::new(i, beta).flat(nr);
            let mut target = base.coeff(i as i32 - 1);
            for (f, x) in xi.iter().enumerate() {
                target -= x * le.s_at(ModeIndex::new(i, beta), ModeIndex::from_flat(f, nr)) * i as f64;
            }
            rhs[row] = target;
            for j in 0..g {
                m[(row, j)] = le.c_at(ModeIndex::new(i, beta), j) * i as f64;
            }
        }
    }
    let svd = m.clone().svd(true, true);
    let a = svd
        .solve(&rhs, 1e-14)
        .map_err(|e| SwError::NormalizationSolveFailed(format!("holomorphic part fit: {e}")))?;
    let residual = (&m * &a - &rhs).iter().map(|x| x.norm()).fold(0.0, f64::max);
    Ok(Decomposition { xi, a: a.iter().copied().collect(), principal_tail, residual })
}
