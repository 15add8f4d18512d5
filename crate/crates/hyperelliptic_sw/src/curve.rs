//! The curve `Λ^{g+1}(w + 1/w) = P(z; u)` and its branch and ramification data.


use airy_engine::RamLabels;
use laurent_core::C64;

use crate::error::SwError;
use crate::poly;

/// Default minimal separation of branch points and of critical points.
pub const DEFAULT_SEPARATION_TOL: f64 = 1e-6;

/// Tag recorded for the sheet convention used throughout the crate.
pub const SHEET_CONVENTION: &str = "w = (P + y) / (2 L^(g+1)), y = +sqrt(Q(z_i)) (principal root) at the i+ point";

/// A ramification point `r_{i±}` of the projection to `P(z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RamPoint {
    /// Index `i` of the critical point, starting at 1.
    pub index: usize,
    /// `+1` for `i+`, `-1` for `i-`.
    pub sheet: i8,
    /// Label such as `"1+"`.
    pub label: String,
    /// Critical point `z_i` with `P'(z_i) = 0`.
    pub z: C64,
    /// Critical value `P(z_i)`.
    pub p_value: C64,
    /// `y` at the point.
    pub y: C64,
    /// `w` at the point.
    pub w: C64,
}

/// A smooth Seiberg-Witten curve `y^2 = P(z; u)^2 - 4 Λ^{2g+2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SWCurve {
    g: usize,
    u: Vec<C64>,
    lambda: C64,
    p_coeffs: Vec<C64>,
    q_coeffs: Vec<C64>,
    branch_points: Vec<C64>,
    critical_points: Vec<C64>,
    ram: Vec<RamPoint>,
    sheet_convention: String,
}

/// Smallest pairwise distance in a point set.
pub fn min_pairwise_distance(v: &[C64]) -> f64 {
    let mut d = f64::INFINITY;
    for i in 0..v.len() {
        for j in 0..i {
            d = d.min((v[i] - v[j]).norm());
        }
    }
    d
}

/// Builds the curve with the default separation tolerance.
pub fn new_curve(g: usize, u: &[C64], lambda: C64) -> Result<SWCurve, SwError> {
    new_curve_with_tol(g, u, lambda, DEFAULT_SEPARATION_TOL)
}

/// Builds the curve; `u[m-1]` multiplies `z^{m-1}` in `P`.
///
/// Fails with [`SwError::SingularCurve`] when two branch points, or two
/// critical points of `P`, are closer than `tol`.
pub fn new_curve_with_tol(g: usize, u: &[C64], lambda: C64, tol: f64) -> Result<SWCurve, SwError> {
    if g == 0 {
        return Err(SwError::InvalidInput("genus must be at least 1".into()));
    }
    if u.len() != g {
        return Err(SwError::InvalidInput(format!("{} moduli given for genus {g}", u.len())));
    }
    if lambda.norm() == 0.0 {
        return Err(SwError::InvalidInput("the scale must be nonzero".into()));
    }
    let zero = C64::new(0.0, 0.0);
    let mut p_coeffs = vec![zero; g + 2];
    p_coeffs[..g].copy_from_slice(u);
    p_coeffs[g + 1] = C64::new(1.0, 0.0);
    let lam2 = lambda.powi(2 * g as i32 + 2);
    let mut q_coeffs = poly::mul(&p_coeffs, &p_coeffs);
    q_coeffs[0] -= lam2 * 4.0;
    let mut branch_points = poly::roots(&q_coeffs);
    poly::sort_points(&mut branch_points);
    let d = min_pairwise_distance(&branch_points);
    if d <= tol {
        return Err(SwError::SingularCurve(format!("branch points collide (minimal distance {d:e})")));
    }
    let mut critical_points = poly::roots(&poly::derivative(&p_coeffs));
    poly::sort_points(&mut critical_points);
    let dc = min_pairwise_distance(&critical_points);
    if dc <= tol {
        return Err(SwError::SingularCurve(format!("critical points of P collide (minimal distance {dc:e})")));
    }
    let lg = lambda.powi(g as i32 + 1);
    let mut ram = Vec::with_capacity(2 * g);
    for (i, &z) in critical_points.iter().enumerate() {
        let p_value = poly::eval(&p_coeffs, z);
        let root = poly::eval(&q_coeffs, z).sqrt();
        for sheet in [1i8, -1] {
            let y = root * sheet as f64;
            ram.push(RamPoint {
                index: i + 1,
                sheet,
                label: format!("{}{}", i + 1, if sheet > 0 { '+' } else { '-' }),
                z,
                p_value,
                y,
                w: (p_value + y) / (lg * 2.0),
            });
        }
    }
    Ok(SWCurve {
        g,
        u: u.to_vec(),
        lambda,
        p_coeffs,
        q_coeffs,
        branch_points,
        critical_points,
        ram,
        sheet_convention: SHEET_CONVENTION.to_string(),
    })
}

impl SWCurve {
    /// Genus.
    pub fn genus(&self) -> usize {
        self.g
    }

    /// Moduli `u_1, ..., u_g`.
    pub fn moduli(&self) -> &[C64] {
        &self.u
    }

    /// Scale `Λ`.
    pub fn lambda(&self) -> C64 {
        self.lambda
    }

    /// Ascending coefficients of `P`.
    pub fn p_coeffs(&self) -> &[C64] {
        &self.p_coeffs
    }

    /// Ascending coefficients of `Q = P^2 - 4 Λ^{2g+2}`.
    pub fn q_coeffs(&self) -> &[C64] {
        &self.q_coeffs
    }

    /// The `2g + 2` roots of `Q`.
    pub fn branch_points(&self) -> &[C64] {
        &self.branch_points
    }

    /// The `g` roots of `P'`.
    pub fn critical_points(&self) -> &[C64] {
        &self.critical_points
    }

    /// Ramification points in label order `1+, 1-, 2+, 2-, ...`.
    pub fn ram_points(&self) -> &[RamPoint] {
        &self.ram
    }

    /// Ramification labels as used by the recursion crates.
    pub fn ram_labels(&self) -> RamLabels {
        RamLabels::new(self.ram.iter().map(|r| r.label.clone()).collect())
    }

    /// Sheet convention tag.
    pub fn sheet_convention(&self) -> &str {
        &self.sheet_convention
    }

    /// `P(z)`.
    pub fn p(&self, z: C64) -> C64 {
        poly::eval(&self.p_coeffs, z)
    }

    /// `P'(z)`.
    pub fn dp(&self, z: C64) -> C64 {
        let n = self.p_coeffs.len();
        let mut acc = C64::new(0.0, 0.0);
        for m in (1..n).rev() {
            acc = acc * z + self.p_coeffs[m] * m as f64;
        }
        acc
    }

    /// `Q(z) = y^2`.
    pub fn q(&self, z: C64) -> C64 {
        poly::eval(&self.q_coeffs, z)
    }

    /// The root of `Q(z)` closest to `reference`.
    pub fn y_near(&self, z: C64, reference: C64) -> C64 {
        let y = self.q(z).sqrt();
        if (y - reference).norm() <= (y + reference).norm() {
            y
        } else {
            -y
        }
    }

    /// `w = (P + y) / (2 Λ^{g+1})`.
    pub fn w(&self, z: C64, y: C64) -> C64 {
        (self.p(z) + y) / (self.lambda.powi(self.g as i32 + 1) * 2.0)
    }

    /// Coefficient of `dz` in `dS = z P'(z) dz / y`.
    pub fn ds(&self, z: C64, y: C64) -> C64 {
        z * self.dp(z) / y
    }

    /// Coefficients of `dz` in the holomorphic differentials `z^{j-1} dz / y`, `j = 1..g`.
    pub fn holomorphic(&self, z: C64, y: C64) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.g);
        let mut zp = y.inv();
        for _ in 0..self.g {
            out.push(zp);
            zp *= z;
        }
        out
    }

    /// Critical point of `P` closest to `z`.
    pub fn nearest_critical(&self, z: C64) -> C64 {
        *self
            .critical_points
            .iter()
            .min_by(|a, b| (*a - z).norm().total_cmp(&(*b - z).norm()))
            .expect("genus is positive")
    }
}
