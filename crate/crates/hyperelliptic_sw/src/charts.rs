//! Standard coordinates `η̄` at the ramification points of the reference curve.
//!
//! With `η^2 = P(z) - P(z_i)` and the Darboux pair `(P, z / y)`, the chart
//! function `F` is fixed by `F(P)^{3/2} = 3 ∫_0^η τ z_odd(τ) / y(τ) dτ` and
//! `η̄ = F^{1/2}`. In `η̄` the reference curve reads `(x̄, ȳ) = (η̄^2, η̄)` and
//! `dS(η̄) - dS(-η̄) = 4 η̄^2 dη̄`.

use laurent_core::{compose, functional_inverse, pow_frac, LaurentSeries, SeriesDifferential, C64};

use crate::curve::{RamPoint, SWCurve};
use crate::cycles::CycleBasis;
use crate::error::SwError;
use crate::poly;

/// Largest ratio of the extraction circle's reach in `z` to the distance to the nearest loop.
pub const LOOP_CLEARANCE: f64 = 0.65;

/// Default series order of the charts.
pub const DEFAULT_CHART_ORDER: i32 = 40;

/// Local data at one ramification point of the reference curve.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardChart {
    /// Label position in the ramification label set.
    pub alpha: usize,
    /// The ramification point.
    pub point: RamPoint,
    /// Highest exponent kept in the series.
    pub order: i32,
    /// `z(η)` with `η^2 = P(z) - P(z_i)`.
    pub z_of_eta: LaurentSeries,
    /// `y(η)` on the sheet of the point.
    pub y_of_eta: LaurentSeries,
    /// `η̄(η)`, an odd series.
    pub etabar_of_eta: LaurentSeries,
    /// `η(η̄)`.
    pub eta_of_etabar: LaurentSeries,
    /// `z(η̄)`.
    pub z_of_etabar: LaurentSeries,
    /// `y(η̄)`.
    pub y_of_etabar: LaurentSeries,
    /// `dz/dη̄`.
    pub dz_detabar: LaurentSeries,
    /// `F` as a series in `P - P(z_i)`.
    pub f_series: LaurentSeries,
    /// `η̄'(0)`.
    pub kappa: C64,
    /// Cube-root branch of `pow_frac` used at the `+` point (the `-` point uses its negative).
    pub cube_root_branch: i32,
    /// Estimated radius of convergence in `η̄`.
    pub radius: f64,
    /// Neighbourhood guard `ε`.
    pub eps: f64,
    /// Outer radius `M` of the chart disc.
    pub m_guard: f64,
    /// Radius of the circle used for coefficient extraction.
    pub r_extract: f64,
}

impl StandardChart {
    /// `(z, y)` at the point with coordinate `η̄`.
    pub fn point_at(&self, etabar: C64) -> (C64, C64) {
        (self.z_of_etabar.eval(etabar), self.y_of_etabar.eval(etabar))
    }

    /// Odd part of `(z/y) / F'(P)` minus `η̄`, as a series; zero for the reference curve.
    pub fn darboux_defect(&self) -> Result<LaurentSeries, SwError> {
        let zy = self.z_of_etabar.div_series(&self.y_of_etabar)?;
        let eta = &self.eta_of_etabar;
        // 1/F' = η η' / η̄
        let factor = eta.mul_series(&eta.derivative()).shift(-1);
        let (odd, _) = zy.mul_series(&factor).parity_split();
        Ok(&odd - &LaurentSeries::monomial(1, C64::new(1.0, 0.0)))
    }

    /// `dz` coefficient series of `dS = z dP / y` in `η̄`.
    pub fn ds_series(&self) -> Result<LaurentSeries, SwError> {
        let eta = &self.eta_of_etabar;
        let dp = eta.mul_series(&eta.derivative()).scale(C64::new(2.0, 0.0));
        Ok(self.z_of_etabar.mul_series(&dp).div_series(&self.y_of_etabar)?)
    }

    /// Coefficient series of `dS(η̄) - σ^* dS(η̄)`; equals `4 η̄^2`.
    pub fn ds_odd_difference(&self) -> Result<LaurentSeries, SwError> {
        let f = self.ds_series()?;
        let (_, even) = f.parity_split();
        Ok(even.scale(C64::new(2.0, 0.0)))
    }
}

/// Series `z(η) - z_i` inverting `η^2 = P(z_i + t) - P(z_i)`, to order `n`.
pub fn local_inverse(p_coeffs: &[C64], z_i: C64, n: i32) -> Result<LaurentSeries, SwError> {
    let taylor = poly::taylor_shift(p_coeffs, z_i);
    let q: Vec<C64> = taylor[2..].to_vec();
    let q = LaurentSeries::exact(0, q).with_trunc(n);
    let root = pow_frac(&q, 1, 2, 0)?;
    let eta_of_t = root.shift(1);
    Ok(functional_inverse(&eta_of_t)?)
}

/// Estimated radius of convergence from the tail of the coefficients.
fn root_test_radius(s: &LaurentSeries) -> f64 {
    let hi = s.max_stored_exp().unwrap_or(0);
    let mut r = f64::INFINITY;
    for m in (hi / 2).max(2)..=hi {
        let c = s.coeff(m).norm();
        if c > 0.0 {
            r = r.min(c.powf(-1.0 / m as f64));
        }
    }
    r
}

fn build_chart(curve: &SWCurve, alpha: usize, order: i32) -> Result<StandardChart, SwError> {
    let point = curve.ram_points()[alpha].clone();
    let g = curve.genus();
    let n = order;
    let zi = point.z;
    let pi = point.p_value;
    let t_of_eta = local_inverse(curve.p_coeffs(), zi, n)?;
    let z_of_eta = &t_of_eta + &LaurentSeries::constant(zi);
    let lam2 = curve.lambda().powi(2 * g as i32 + 2);
    let ysq = LaurentSeries::exact(0, vec![pi * pi - lam2 * 4.0, C64::new(0.0, 0.0), pi * 2.0, C64::new(0.0, 0.0), C64::new(1.0, 0.0)])
        .with_trunc(n);
    let mut y_plus = pow_frac(&ysq, 1, 2, 0)?;
    let y_ref_plus = point.y * point.sheet as f64;
    if (y_plus.coeff(0) - y_ref_plus).norm() > (y_plus.coeff(0) + y_ref_plus).norm() {
        y_plus = y_plus.scale(C64::new(-1.0, 0.0));
    }
    let sheet = C64::new(point.sheet as f64, 0.0);
    let y_of_eta = y_plus.scale(sheet);
    let (z_odd, _) = z_of_eta.parity_split();
    let integrand = z_odd.shift(1).div_series(&y_plus)?;
    let cube = SeriesDifferential::new(integrand).primitive()?.scale(C64::new(3.0, 0.0));
    let cube_root_branch = 0;
    let etabar_plus = pow_frac(&cube, 1, 3, cube_root_branch)?;
    let etabar_of_eta = etabar_plus.scale(sheet);
    let eta_of_etabar = functional_inverse(&etabar_of_eta)?;
    let z_of_etabar = compose(&z_of_eta, &eta_of_etabar)?;
    let y_of_etabar = compose(&y_of_eta, &eta_of_etabar)?;
    let dz_detabar = z_of_etabar.derivative();
    let fsq = etabar_of_eta.mul_series(&etabar_of_eta);
    let top = fsq.trunc_order().unwrap_or(2 * n) / 2;
    let f_series = LaurentSeries::from_fn(1, top, Some(top), |m| fsq.coeff(2 * m));
    let kappa = etabar_of_eta.coeff(1);
    // singularities: other critical values and the branch values ±2Λ^{g+1}
    let lg = curve.lambda().powi(g as i32 + 1);
    let mut sing: Vec<C64> = curve.ram_points().iter().filter(|r| r.index != point.index).map(|r| r.p_value).collect();
    sing.push(lg * 2.0);
    sing.push(-lg * 2.0);
    let r_eta = sing.iter().map(|s| (s - pi).norm().sqrt()).fold(f64::INFINITY, f64::min);
    let radius = (kappa.norm() * r_eta).min(root_test_radius(&z_of_etabar)).min(root_test_radius(&y_of_etabar));
    Ok(StandardChart {
        alpha,
        point,
        order: n,
        z_of_eta,
        y_of_eta,
        etabar_of_eta,
        eta_of_etabar,
        z_of_etabar,
        y_of_etabar,
        dz_detabar,
        f_series,
        kappa,
        cube_root_branch,
        radius,
        eps: 0.2 * radius,
        m_guard: 0.5 * radius,
        r_extract: 0.35 * radius,
    })
}

/// Value `F(P(z_i(u); u))` for the curve `c` at the chart of `reference`.
pub fn chart_shift(chart: &StandardChart, c: &SWCurve) -> C64 {
    let zu = c.nearest_critical(chart.point.z);
    chart.f_series.eval(c.p(zu) - chart.point.p_value)
}

/// Charts of `reference` at every ramification point, checking that `c` lies
/// in their neighbourhood (`|F(P(z_i(u); u))| < ε^2 / 2`).
pub fn standard_charts(c: &SWCurve, reference: &SWCurve) -> Result<Vec<StandardChart>, SwError> {
    standard_charts_with_order(c, reference, DEFAULT_CHART_ORDER)
}

/// [`standard_charts`] with an explicit series order.
pub fn standard_charts_with_order(c: &SWCurve, reference: &SWCurve, order: i32) -> Result<Vec<StandardChart>, SwError> {
    if c.genus() != reference.genus() {
        return Err(SwError::InvalidInput("curves of different genus".into()));
    }
    let charts: Vec<StandardChart> =
        (0..reference.ram_points().len()).map(|a| build_chart(reference, a, order)).collect::<Result<_, _>>()?;
    for ch in &charts {
        check_neighbourhood(ch, c)?;
    }
    Ok(charts)
}

/// Fails with [`SwError::OutOfNeighbourhood`] when `c` is too far from the chart's curve.
pub fn check_neighbourhood(chart: &StandardChart, c: &SWCurve) -> Result<(), SwError> {
    let value = chart_shift(chart, c).norm();
    let bound = 0.5 * chart.eps * chart.eps;
    if value >= bound {
        return Err(SwError::OutOfNeighbourhood { label: chart.point.label.clone(), value, bound });
    }
    Ok(())
}

/// Shrinks the chart discs so that the extraction circles stay away from the cycle contours.
///
/// The z-image of the circle `|η̄| = r_extract` must stay within
/// `LOOP_CLEARANCE` of the distance from `z_i` to the nearest loop; `M` and `ε`
/// scale with the extraction radius.
pub fn fit_to_cycles(charts: &mut [StandardChart], cyc: &CycleBasis) {
    for ch in charts.iter_mut() {
        let dist = cyc.distance_to(ch.point.z);
        loop {
            let reach = (0..64)
                .map(|k| {
                    let e = C64::from_polar(ch.r_extract, 2.0 * std::f64::consts::PI * k as f64 / 64.0);
                    (ch.z_of_etabar.eval(e) - ch.point.z).norm()
                })
                .fold(0.0, f64::max);
            if reach < LOOP_CLEARANCE * dist || ch.r_extract < 1e-3 * ch.radius {
                break;
            }
            ch.r_extract *= 0.9;
            ch.m_guard = ch.r_extract / 0.7;
            ch.eps = 0.4 * ch.m_guard;
        }
    }
}
