//! Contours in the z-plane lifted to the curve by analytic continuation of `y`,
//! and adaptive composite Gauss-Legendre quadrature along them.

use std::f64::consts::PI;
use std::sync::OnceLock;

use gauss_quad::GaussLegendre;

use laurent_core::C64;

use crate::curve::SWCurve;
use crate::error::SwError;

/// Gauss-Legendre order used on every panel.
pub const PANEL_ORDER: usize = 16;

fn rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let gl = GaussLegendre::new(PANEL_ORDER).expect("order at least 2");
        let mut v = gl.as_node_weight_pairs().to_vec();
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        v
    })
}

/// A smooth parameterized path `t ∈ [0, t_max]` with a starting value of `y`.
pub trait Path {
    fn t_max(&self) -> f64;
    fn point(&self, t: f64) -> C64;
    fn deriv(&self, t: f64) -> C64;
    /// Value of `y` at `t = 0` that fixes the sheet (nearest root is taken).
    fn y_start(&self) -> C64;
}

/// A counterclockwise ellipse `c + d (A cos t + i B sin t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LoopPath {
    pub center: C64,
    pub dir: C64,
    pub semi_major: f64,
    pub semi_minor: f64,
    pub y_start: C64,
}

impl LoopPath {
    /// Ellipse around the segment `[e1, e2]` with clearance `h` beyond each end.
    ///
    /// The minor axis is chosen so that the curvature radius at the vertices is
    /// at least `h`; `y_start` is the principal root at `t = 0` (beyond `e2`).
    pub fn around_segment(curve: &SWCurve, e1: C64, e2: C64, h: f64) -> Self {
        let len = (e2 - e1).norm();
        let a = 0.5 * len + h;
        let mut l = LoopPath {
            center: (e1 + e2) * 0.5,
            dir: (e2 - e1) / len,
            semi_major: a,
            semi_minor: (h * a).sqrt(),
            y_start: C64::new(1.0, 0.0),
        };
        l.y_start = curve.q(l.point(0.0)).sqrt();
        l
    }

    /// Elliptic level `sqrt((x/A)^2 + (y/B)^2)` of `z` in the ellipse frame; `< 1` inside.
    pub fn level(&self, z: C64) -> f64 {
        let w = (z - self.center) / self.dir;
        ((w.re / self.semi_major).powi(2) + (w.im / self.semi_minor).powi(2)).sqrt()
    }

    /// `m` equally spaced parameter points (the first repeated at the end).
    pub fn polyline(&self, m: usize) -> Vec<C64> {
        (0..=m).map(|k| self.point(2.0 * PI * k as f64 / m as f64)).collect()
    }

    /// Smallest distance from `z` to the ellipse, sampled.
    pub fn distance_to(&self, z: C64) -> f64 {
        self.polyline(2048).iter().map(|p| (p - z).norm()).fold(f64::INFINITY, f64::min)
    }
}

impl Path for LoopPath {
    fn t_max(&self) -> f64 {
        2.0 * PI
    }
    fn point(&self, t: f64) -> C64 {
        self.center + self.dir * C64::new(self.semi_major * t.cos(), self.semi_minor * t.sin())
    }
    fn deriv(&self, t: f64) -> C64 {
        self.dir * C64::new(-self.semi_major * t.sin(), self.semi_minor * t.cos())
    }
    fn y_start(&self) -> C64 {
        self.y_start
    }
}

/// A counterclockwise circle.
#[derive(Debug, Clone, PartialEq)]
pub struct CirclePath {
    pub center: C64,
    pub radius: f64,
    pub y_start: C64,
}

impl Path for CirclePath {
    fn t_max(&self) -> f64 {
        2.0 * PI
    }
    fn point(&self, t: f64) -> C64 {
        self.center + C64::from_polar(self.radius, t)
    }
    fn deriv(&self, t: f64) -> C64 {
        C64::from_polar(self.radius, t) * C64::new(0.0, 1.0)
    }
    fn y_start(&self) -> C64 {
        self.y_start
    }
}

/// A straight segment.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentPath {
    pub from: C64,
    pub to: C64,
    pub y_start: C64,
}

impl Path for SegmentPath {
    fn t_max(&self) -> f64 {
        1.0
    }
    fn point(&self, t: f64) -> C64 {
        self.from + (self.to - self.from) * t
    }
    fn deriv(&self, _t: f64) -> C64 {
        self.to - self.from
    }
    fn y_start(&self) -> C64 {
        self.y_start
    }
}

/// Tolerances of the adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    /// Relative tolerance on the change between successive panel doublings.
    pub rel_tol: f64,
    /// Absolute tolerance on the same change.
    pub abs_tol: f64,
    /// Number of panels of the first pass.
    pub min_panels: usize,
    /// Hard cap on the number of nodes.
    pub max_nodes: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions { rel_tol: 1e-12, abs_tol: 1e-13, min_panels: 32, max_nodes: 1 << 20 }
    }
}

/// Result of [`integrate_path`].
#[derive(Debug, Clone, PartialEq)]
pub struct QuadResult {
    /// One integral per component of the integrand.
    pub values: Vec<C64>,
    /// Nodes of the accepted pass.
    pub nodes: usize,
    /// Change between the last two passes.
    pub change: f64,
    /// `y` continued to the end of the path.
    pub y_end: C64,
}

/// Nodes `(z, y, dz/dt * weight)` of a composite rule with `panels` panels,
/// with `y` continued from the start of the path, and the continued `y` at the end.
pub fn lifted_nodes(curve: &SWCurve, path: &dyn Path, panels: usize) -> (Vec<(C64, C64, C64)>, C64) {
    let t_max = path.t_max();
    let width = t_max / panels as f64;
    let mut y_prev = curve.y_near(path.point(0.0), path.y_start());
    let mut out = Vec::with_capacity(panels * PANEL_ORDER);
    for p in 0..panels {
        let t0 = p as f64 * width;
        for &(x, w) in rule() {
            let t = t0 + 0.5 * width * (x + 1.0);
            let z = path.point(t);
            let y = curve.y_near(z, y_prev);
            y_prev = y;
            out.push((z, y, path.deriv(t) * (0.5 * width * w)));
        }
    }
    let y_end = curve.y_near(path.point(t_max), y_prev);
    (out, y_end)
}

/// Integrates the components of `f(z, y, out)` (coefficients of `dz`) along the lifted path.
///
/// The number of panels is doubled until the largest change of any component
/// is below `abs_tol + rel_tol * max|I|`.
pub fn integrate_path(
    curve: &SWCurve,
    path: &dyn Path,
    ncomp: usize,
    f: &dyn Fn(C64, C64, &mut [C64]),
    opts: &QuadOptions,
) -> Result<QuadResult, SwError> {
    let mut panels = opts.min_panels.max(1);
    let mut prev: Option<Vec<C64>> = None;
    let mut buf = vec![C64::new(0.0, 0.0); ncomp];
    let mut change = f64::INFINITY;
    loop {
        let nodes = panels * PANEL_ORDER;
        if nodes > opts.max_nodes {
            return Err(SwError::QuadratureNotConverged { nodes: nodes / 2, change });
        }
        let (pts, y_end) = lifted_nodes(curve, path, panels);
        let mut acc = vec![C64::new(0.0, 0.0); ncomp];
        for &(z, y, dw) in &pts {
            f(z, y, &mut buf);
            for (a, b) in acc.iter_mut().zip(&buf) {
                *a += b * dw;
            }
        }
        if let Some(p) = &prev {
            change = acc.iter().zip(p).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            let scale = acc.iter().map(|a| a.norm()).fold(0.0, f64::max);
            if change <= opts.abs_tol + opts.rel_tol * scale {
                return Ok(QuadResult { values: acc, nodes, change, y_end });
            }
        }
        prev = Some(acc);
        panels *= 2;
    }
}
