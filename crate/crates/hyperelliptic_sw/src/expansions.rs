//! Expansions of the normalized Bergman kernel and the normalized holomorphic
//! differentials in the standard coordinates, and the global differentials `ē^{k,α}`.
//!
//! In the coordinates `η̄_α` the kernel reads
//! `B = δ_{αβ} dη̄_1 dη̄_2 / (η̄_1 - η̄_2)^2 + Σ i j s^{(i,α)(j,β)} η̄_1^{i-1} η̄_2^{j-1} dη̄_1 dη̄_2`
//! and `ω_j = Σ_k c^{k,α}_j k η̄^{k-1} dη̄`.

use nalgebra::DMatrix;
use rustfft::FftPlanner;

use airy_engine::{ModeIndex, RamLabels};
use laurent_core::{LaurentSeries, C64};

use crate::bergman::{BergmanData, CurvePoint};
use crate::charts::StandardChart;
use crate::contour::{integrate_path, QuadOptions};
use crate::cycles::CycleBasis;
use crate::error::SwError;

/// Ratio of the second extraction radius to the first on a single chart.
const SAME_CHART_RADIUS_RATIO: f64 = 0.6;
/// Ratio used for distinct charts, so that no pair of nodes are conjugate points
/// `(z, y)` and `(z, -y)`, where the closed form of the kernel is `0/0`.
const CROSS_CHART_RADIUS_RATIO: f64 = 0.8;
/// Number of trapezoid nodes used for `ē^{k,α}` at a point.
pub const EBAR_NODES: usize = 128;

/// Settings for [`local_expansions_with`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionOptions {
    /// Largest mode number `k`.
    pub kmax: u32,
    /// Initial FFT size per dimension.
    pub fft_min: usize,
    /// Largest FFT size per dimension.
    pub fft_max: usize,
    /// Two successive FFT sizes must agree to this tolerance, relative to the sampled values.
    pub rel_tol: f64,
}

impl Default for ExpansionOptions {
    fn default() -> Self {
        ExpansionOptions { kmax: 5, fft_min: 32, fft_max: 512, rel_tol: 1e-11 }
    }
}

/// The coefficients `s` and `c` with their labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalExpansions {
    ram: RamLabels,
    kmax: u32,
    s: DMatrix<C64>,
    s_asymmetry: f64,
    c: DMatrix<C64>,
    fft_size: usize,
}

impl LocalExpansions {
    pub fn ram(&self) -> &RamLabels {
        &self.ram
    }

    pub fn kmax(&self) -> u32 {
        self.kmax
    }

    /// Genus (number of normalized differentials).
    pub fn genus(&self) -> usize {
        self.c.ncols()
    }

    /// Symmetrized `s` over flat mode indices.
    pub fn s(&self) -> &DMatrix<C64> {
        &self.s
    }

    /// `max |s^{a b} - s^{b a}|` of the extracted values, relative to `max |s|`.
    pub fn s_asymmetry(&self) -> f64 {
        self.s_asymmetry
    }

    /// `c` with rows indexed by flat mode indices and columns by `j`.
    pub fn c(&self) -> &DMatrix<C64> {
        &self.c
    }

    /// `c^{k,α}_j` with `j` counted from zero.
    pub fn c_at(&self, m: ModeIndex, j: usize) -> C64 {
        self.c[(m.flat(self.ram.len()), j)]
    }

    /// `s^{a b}` by mode indices.
    pub fn s_at(&self, a: ModeIndex, b: ModeIndex) -> C64 {
        let r = self.ram.len();
        self.s[(a.flat(r), b.flat(r))]
    }

    /// FFT size per dimension at which the extraction converged.
    pub fn fft_size(&self) -> usize {
        self.fft_size
    }

    /// Coefficient series of `ē^{k,α}` at label `beta`, truncated after `η̄^{kmax-1}`.
    pub fn ebar_local(&self, m: ModeIndex, beta: usize) -> LaurentSeries {
        let lo = -(m.k as i32) - 1;
        let hi = self.kmax as i32 - 1;
        LaurentSeries::from_fn(lo, hi, Some(hi), |e| {
            let mut v = C64::new(0.0, 0.0);
            if e == lo && m.alpha == beta {
                v += C64::new(1.0, 0.0);
            }
            if e >= 0 && m.k <= self.kmax {
                let i = (e + 1) as u32;
                v += self.s_at(ModeIndex::new(i, beta), m) * i as f64;
            }
            v
        })
    }

    /// Coefficient series of `ω_j` at label `beta`.
    pub fn omega_local(&self, j: usize, beta: usize) -> LaurentSeries {
        let hi = self.kmax as i32 - 1;
        LaurentSeries::from_fn(0, hi, Some(hi), |e| {
            let k = (e + 1) as u32;
            self.c_at(ModeIndex::new(k, beta), j) * k as f64
        })
    }

    /// The `c` table as JSON rows `{k, label, j, re, im}`.
    pub fn c_json(&self) -> serde_json::Value {
        let r = self.ram.len();
        let rows: Vec<serde_json::Value> = (0..self.c.nrows())
            .flat_map(|f| {
                let m = ModeIndex::from_flat(f, r);
                (0..self.c.ncols()).map(move |j| (m, j))
            })
            .map(|(m, j)| {
                let v = self.c[(m.flat(r), j)];
                serde_json::json!({"k": m.k, "label": self.ram.name(m.alpha), "j": j + 1, "re": v.re, "im": v.im})
            })
            .collect();
        serde_json::Value::Array(rows)
    }

    /// The `s` table as JSON rows `{k1, label1, k2, label2, re, im}`.
    pub fn s_json(&self) -> serde_json::Value {
        let r = self.ram.len();
        let mut rows = Vec::new();
        for a in 0..self.s.nrows() {
            for b in 0..self.s.ncols() {
                let (ma, mb) = (ModeIndex::from_flat(a, r), ModeIndex::from_flat(b, r));
                let v = self.s[(a, b)];
                rows.push(serde_json::json!({
                    "k1": ma.k, "label1": self.ram.name(ma.alpha),
                    "k2": mb.k, "label2": self.ram.name(mb.alpha),
                    "re": v.re, "im": v.im
                }));
            }
        }
        serde_json::Value::Array(rows)
    }
}

/// Series of the normalized differentials `ω_j` (as `dη̄` coefficients) at a chart.
pub fn omega_series(b: &BergmanData, chart: &StandardChart) -> Result<Vec<LaurentSeries>, SwError> {
    let g = b.curve().genus();
    let n = b.norm_matrix();
    let base = chart.dz_detabar.div_series(&chart.y_of_etabar)?;
    let mut v = Vec::with_capacity(g);
    let mut zpow = LaurentSeries::constant(C64::new(1.0, 0.0));
    for _ in 0..g {
        v.push(base.mul_series(&zpow));
        zpow = zpow.mul_series(&chart.z_of_etabar);
    }
    Ok((0..g)
        .map(|j| {
            let mut acc = LaurentSeries::zero();
            for (m, vm) in v.iter().enumerate() {
                acc = acc.linear_combination(C64::new(1.0, 0.0), vm, n[(j, m)]);
            }
            acc
        })
        .collect())
}

/// Point on the curve and `dz/dη̄` at coordinate `e` of a chart.
fn chart_point(b: &BergmanData, chart: &StandardChart, e: C64) -> (CurvePoint, C64) {
    let z = chart.z_of_etabar.eval(e);
    let y = b.curve().y_near(z, chart.y_of_etabar.eval(e));
    ((z, y), chart.dz_detabar.eval(e))
}

/// In-place two-dimensional forward FFT of an `n × n` row-major array.
fn fft2(data: &mut [C64], n: usize) {
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(n);
    for row in data.chunks_mut(n) {
        fft.process(row);
    }
    let mut col = vec![C64::new(0.0, 0.0); n];
    for j in 0..n {
        for i in 0..n {
            col[i] = data[i * n + j];
        }
        fft.process(&mut col);
        for i in 0..n {
            data[i * n + j] = col[i];
        }
    }
}

/// `P^{(i,α)(j,β)}` for `1 ≤ i, j ≤ kmax` from an `n × n` grid.
fn extract_block(
    b: &BergmanData,
    ca: &StandardChart,
    cb: &StandardChart,
    r1: f64,
    r2: f64,
    kmax: usize,
    n: usize,
) -> (DMatrix<C64>, f64) {
    let same = ca.alpha == cb.alpha;
    let pts = |ch: &StandardChart, r: f64| -> Vec<(CurvePoint, C64, C64)> {
        (0..n)
            .map(|m| {
                let e = C64::from_polar(r, 2.0 * std::f64::consts::PI * m as f64 / n as f64);
                let (p, dz) = chart_point(b, ch, e);
                (p, dz, e)
            })
            .collect()
    };
    let pa = pts(ca, r1);
    let pb = pts(cb, r2);
    let mut grid = vec![C64::new(0.0, 0.0); n * n];
    let mut vmax: f64 = 0.0;
    for (i1, (p1, d1, e1)) in pa.iter().enumerate() {
        for (i2, (p2, d2, e2)) in pb.iter().enumerate() {
            let mut v = b.eval(*p1, *p2) * d1 * d2;
            vmax = vmax.max(v.norm());
            if same {
                v -= (e1 - e2).powi(-2);
            }
            grid[i1 * n + i2] = v;
        }
    }
    fft2(&mut grid, n);
    let norm = (n * n) as f64;
    let p = DMatrix::from_fn(kmax, kmax, |i, j| grid[i * n + j] / (norm * r1.powi(i as i32) * r2.powi(j as i32)));
    (p, vmax)
}

/// [`local_expansions_with`] with `kmax` and default settings otherwise.
pub fn local_expansions(b: &BergmanData, charts: &[StandardChart], kmax: u32) -> Result<LocalExpansions, SwError> {
    local_expansions_with(b, charts, &ExpansionOptions { kmax, ..ExpansionOptions::default() })
}

/// Extracts `s` by a two-dimensional FFT of the kernel on circles in each pair
/// of charts (subtracting the diagonal pole on a single chart), and `c` from
/// the series of the normalized differentials.
///
/// The circles have radius `M` of the first chart and a fixed fraction of `M`
/// of the second; the loss of digits in the coefficient of `η̄_1^{i-1} η̄_2^{j-1}`
/// grows like the inverse radii to the power `i + j - 2`.
///
/// Fails with [`SwError::ExtractionNotConverged`] when two successive FFT
/// sizes disagree up to `fft_max`.
pub fn local_expansions_with(b: &BergmanData, charts: &[StandardChart], opts: &ExpansionOptions) -> Result<LocalExpansions, SwError> {
    let ram = b.curve().ram_labels();
    let nr = ram.len();
    if charts.len() != nr {
        return Err(SwError::InvalidInput(format!("{} charts for {nr} ramification points", charts.len())));
    }
    if opts.kmax == 0 {
        return Err(SwError::InvalidInput("kmax must be positive".into()));
    }
    let k = opts.kmax as usize;
    let dim = k * nr;
    let g = b.curve().genus();
    let mut c = DMatrix::from_element(dim, g, C64::new(0.0, 0.0));
    for ch in charts {
        let om = omega_series(b, ch)?;
        for (j, s) in om.iter().enumerate() {
            for kk in 1..=k {
                if !s.is_known(kk as i32 - 1) {
                    return Err(SwError::ExtractionNotConverged(format!("chart series too short for k = {kk}")));
                }
                c[(ModeIndex::new(kk as u32, ch.alpha).flat(nr), j)] = s.coeff(kk as i32 - 1) / kk as f64;
            }
        }
    }
    let mut raw = DMatrix::from_element(dim, dim, C64::new(0.0, 0.0));
    let mut fft_size = 0;
    for ca in charts {
        for cb in charts {
            let r1 = ca.m_guard;
            let r2 = if ca.alpha == cb.alpha { SAME_CHART_RADIUS_RATIO } else { CROSS_CHART_RADIUS_RATIO } * cb.m_guard;
            let mut n = opts.fft_min;
            let (mut prev, _) = extract_block(b, ca, cb, r1, r2, k, n);
            let block = loop {
                if 2 * n > opts.fft_max {
                    return Err(SwError::ExtractionNotConverged(format!(
                        "kernel coefficients at ({}, {}) did not settle by FFT size {}",
                        ca.point.label, cb.point.label, opts.fft_max
                    )));
                }
                n *= 2;
                let (next, vmax) = extract_block(b, ca, cb, r1, r2, k, n);
                if next.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
                    return Err(SwError::ExtractionNotConverged(format!(
                        "non-finite kernel values at ({}, {})",
                        ca.point.label, cb.point.label
                    )));
                }
                let change = (0..k)
                    .flat_map(|i| (0..k).map(move |j| (i, j)))
                    .map(|(i, j)| (next[(i, j)] - prev[(i, j)]).norm() * r1.powi(i as i32) * r2.powi(j as i32))
                    .fold(0.0, f64::max);
                if change <= opts.rel_tol * vmax.max(1.0) {
                    break next;
                }
                prev = next;
            };
            fft_size = fft_size.max(n);
            for i in 0..k {
                for j in 0..k {
                    let a = ModeIndex::new(i as u32 + 1, ca.alpha).flat(nr);
                    let bb = ModeIndex::new(j as u32 + 1, cb.alpha).flat(nr);
                    raw[(a, bb)] = block[(i, j)] / ((i + 1) * (j + 1)) as f64;
                }
            }
        }
    }
    let scale = raw.iter().map(|x| x.norm()).fold(f64::MIN_POSITIVE, f64::max);
    let s_asymmetry = (&raw - raw.transpose()).iter().map(|x| x.norm()).fold(0.0, f64::max) / scale;
    let s = (&raw + raw.transpose()).map(|x| x * 0.5);
    Ok(LocalExpansions { ram, kmax: opts.kmax, s, s_asymmetry, c, fft_size })
}

/// Evaluator of the global differentials `ē^{k,β}` as `dz` coefficients.
///
/// `ē^{k,β}(p) = (1/k) Res_{q → r_β} B(p, q) η̄_β(q)^{-k}`, computed with the
/// trapezoid rule on the circle `|η̄_β| = r_β`. The point `p` must lie outside
/// that circle.
#[derive(Debug, Clone)]
pub struct EbarEvaluator<'a> {
    b: &'a BergmanData,
    nodes: Vec<Vec<(CurvePoint, C64, C64)>>,
    kmax: u32,
}

impl<'a> EbarEvaluator<'a> {
    pub fn new(b: &'a BergmanData, charts: &[StandardChart], kmax: u32) -> Self {
        let n = EBAR_NODES;
        let nodes = charts
            .iter()
            .map(|ch| {
                (0..n)
                    .map(|m| {
                        let e = C64::from_polar(ch.r_extract, 2.0 * std::f64::consts::PI * m as f64 / n as f64);
                        let (p, dz) = chart_point(b, ch, e);
                        (p, dz, e)
                    })
                    .collect()
            })
            .collect();
        EbarEvaluator { b, nodes, kmax }
    }

    pub fn kmax(&self) -> u32 {
        self.kmax
    }

    /// Values of `ē^{k,β}` at `p` for every flat index `(k, β)` with `k ≤ kmax`.
    pub fn eval_all(&self, p: CurvePoint, out: &mut [C64]) {
        let nr = self.nodes.len();
        out.iter_mut().for_each(|x| *x = C64::new(0.0, 0.0));
        for (beta, nodes) in self.nodes.iter().enumerate() {
            for (q, dz, e) in nodes {
                let w = self.b.eval(p, *q) * dz;
                let inv = e.inv();
                let mut pw = C64::new(1.0, 0.0);
                for k in 1..=self.kmax {
                    // q^{1-k}
                    out[ModeIndex::new(k, beta).flat(nr)] += w * pw;
                    pw *= inv;
                }
            }
        }
        let n = EBAR_NODES as f64;
        for (f, x) in out.iter_mut().enumerate() {
            let k = ModeIndex::from_flat(f, nr).k as f64;
            *x /= k * n;
        }
    }

    /// Value of `ē^{k,β}` at `p`.
    pub fn eval(&self, m: ModeIndex, p: CurvePoint) -> C64 {
        let mut out = vec![C64::new(0.0, 0.0); self.kmax as usize * self.nodes.len()];
        self.eval_all(p, &mut out);
        out[m.flat(self.nodes.len())]
    }
}

/// A- and B-periods of every `ē^{k,β}` with `k ≤ kmax`: `(A[f][i], B[f][i])` for flat index `f`.
pub fn ebar_periods(
    b: &BergmanData,
    charts: &[StandardChart],
    cyc: &CycleBasis,
    kmax: u32,
    opts: &QuadOptions,
) -> Result<(Vec<Vec<C64>>, Vec<Vec<C64>>), SwError> {
    let ev = EbarEvaluator::new(b, charts, kmax);
    let dim = kmax as usize * charts.len();
    let f = |z: C64, y: C64, out: &mut [C64]| ev.eval_all((z, y), out);
    let mut per_loop = Vec::with_capacity(cyc.loops.len());
    for l in &cyc.loops {
        per_loop.push(integrate_path(b.curve(), l, dim, &f, opts)?.values);
    }
    let (ap, bp) = cyc.combine(&per_loop);
    let g = cyc.genus();
    let tr = |v: Vec<Vec<C64>>| (0..dim).map(|f| (0..g).map(|i| v[i][f]).collect()).collect();
    Ok((tr(ap), tr(bp)))
}
