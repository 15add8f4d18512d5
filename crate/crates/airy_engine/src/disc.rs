//! The disc embedding and a randomized search for finite solutions of the constraints.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use laurent_core::{sqrt_shift_flow, LaurentSeries, SeriesDifferential, C64};

use crate::error::AiryError;
use crate::hamiltonians::{eval_hamiltonians, max_abs_value};
use crate::index::{ModeIndex, RamLabels};
use crate::tensors::Variant;
use crate::welement::WElement;

/// Embeds the disc `(x = z^2 + a, y)` at label `alpha`:
/// `Φ = z d(z^2) - y(sqrt(z^2 - a)) d(z^2)`, zero at every other label.
///
/// The stored coefficients of `y` are read as an exact polynomial. The
/// descending tail of `Φ` is infinite; it is kept down to the exponent needed
/// for every Hamiltonian of index at most `kmax` to be exact.
pub fn embed_disc(a: C64, y: &LaurentSeries, alpha: usize, ram: &RamLabels, kmax: u32) -> Result<WElement, AiryError> {
    if y.terms().any(|(e, c)| e < 0 && c.norm() > 0.0) {
        return Err(AiryError::ShapeMismatch("y must be a power series".into()));
    }
    if y.coeff(1).norm() == 0.0 {
        return Err(AiryError::DegenerateDisc);
    }
    if alpha >= ram.len() {
        return Err(AiryError::ShapeMismatch(format!("label {alpha} out of range")));
    }
    let poly = LaurentSeries::exact(y.min_exp(), y.terms().map(|(_, c)| c).collect());
    let degree = poly.max_stored_exp().unwrap_or(0);
    // y d(z^2) = 2 z y dz is invariant in form; its pullback along z -> sqrt(z^2 - a)
    // needs coefficients down to z^{-(2n + degree)} for H_{2n-1} with 2n - 1 <= kmax.
    let low_cut = -(kmax as i32 + 1 + 2 * degree + 4);
    let theta = SeriesDifferential::new(poly.shift(1).scale(C64::new(2.0, 0.0)));
    let moved = sqrt_shift_flow(&theta, -a, low_cut);
    let base = LaurentSeries::monomial(2, C64::new(2.0, 0.0));
    let phi = SeriesDifferential::new(&base - &moved.base);
    let mut parts = vec![SeriesDifferential::new(LaurentSeries::zero()); ram.len()];
    parts[alpha] = phi;
    WElement::new(ram.clone(), parts)
}

/// Settings for [`triviality_search`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrivialitySearchConfig {
    /// Number of random starting points.
    pub trials: usize,
    /// Largest number of nonzero `y` modes.
    pub max_y_modes: usize,
    /// Largest mode index used for `y` and `x`.
    pub max_mode: u32,
    /// Every coordinate has real and imaginary parts in `[-box_radius, box_radius]`.
    pub box_radius: f64,
    /// Lower bound on `|x^1|`.
    pub x1_min: f64,
    /// Local refinement steps applied to the best starting points.
    pub refine_steps: usize,
    /// Number of starting points that are refined.
    pub refine_starts: usize,
    pub seed: u64,
}

impl Default for TrivialitySearchConfig {
    fn default() -> Self {
        TrivialitySearchConfig { trials: 400, max_y_modes: 6, max_mode: 9, box_radius: 1.0, x1_min: 0.1, refine_steps: 300, refine_starts: 8, seed: 7 }
    }
}

/// Outcome of [`triviality_search`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrivialitySearchReport {
    /// Number of Hamiltonian evaluations.
    pub evaluations: usize,
    /// Smallest value of `max_i |H_i|` found.
    pub min_max_abs_h: f64,
    /// Nonzero `y` modes of the minimizer as `(k, re, im)`.
    pub witness_y: Vec<(u32, f64, f64)>,
    /// Nonzero `x` modes of the minimizer as `(k, re, im)`.
    pub witness_x: Vec<(u32, f64, f64)>,
}

#[derive(Debug, Clone)]
struct Candidate {
    y_modes: Vec<u32>,
    x_modes: Vec<u32>,
    y: Vec<C64>,
    x: Vec<C64>,
}

impl Candidate {
    fn element(&self) -> WElement {
        let ym: Vec<(ModeIndex, C64)> = self.y_modes.iter().zip(&self.y).map(|(&k, &v)| (ModeIndex::new(k, 0), v)).collect();
        let xm: Vec<(ModeIndex, C64)> = self.x_modes.iter().zip(&self.x).map(|(&k, &v)| (ModeIndex::new(k, 0), v)).collect();
        WElement::from_coordinates(RamLabels::single(), &xm, &ym)
    }

    fn clamp(&mut self, cfg: &TrivialitySearchConfig) {
        let r = cfg.box_radius;
        for v in self.y.iter_mut().chain(self.x.iter_mut()) {
            *v = C64::new(v.re.clamp(-r, r), v.im.clamp(-r, r));
        }
        let x1 = self.x[0];
        if x1.norm() < cfg.x1_min {
            self.x[0] = if x1.norm() > 0.0 { x1 * (cfg.x1_min / x1.norm()) } else { C64::new(cfg.x1_min, 0.0) };
        }
    }
}

fn objective(c: &Candidate, kmax: u32) -> f64 {
    let h = eval_hamiltonians(&c.element(), Variant::ResidueConstraints, kmax).expect("exact elements have known residues");
    max_abs_value(&h)
}

fn random_coord(rng: &mut ChaCha8Rng, r: f64) -> C64 {
    C64::new(rng.random_range(-r..=r), rng.random_range(-r..=r))
}

/// Searches for finite elements with `x^1 ≠ 0` on which every Hamiltonian
/// of the residue constraints is small.
///
/// Random starting points have at most `max_y_modes` nonzero `y` modes and a
/// few `x` modes, all inside the coordinate box. The best starting points are
/// refined by a (1+1) evolution strategy with step-size adaptation. Every
/// Hamiltonian that can be nonzero on such elements is evaluated.
pub fn triviality_search(cfg: &TrivialitySearchConfig) -> TrivialitySearchReport {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let kmax = 2 * cfg.max_mode + 5;
    let mut evaluations = 0;
    let mut starts: Vec<(f64, Candidate)> = Vec::with_capacity(cfg.trials);
    for _ in 0..cfg.trials {
        let ny = rng.random_range(0..=cfg.max_y_modes.min(cfg.max_mode as usize));
        let y_modes: Vec<u32> = rand::seq::index::sample(&mut rng, cfg.max_mode as usize, ny).into_iter().map(|k| k as u32 + 1).collect();
        let mut x_modes = vec![1u32];
        for k in 2..=cfg.max_mode {
            if rng.random_bool(0.3) {
                x_modes.push(k);
            }
        }
        let y = y_modes.iter().map(|_| random_coord(&mut rng, cfg.box_radius)).collect();
        let x = x_modes.iter().map(|_| random_coord(&mut rng, cfg.box_radius)).collect();
        let mut cand = Candidate { y_modes, x_modes, y, x };
        cand.clamp(cfg);
        let val = objective(&cand, kmax);
        evaluations += 1;
        starts.push((val, cand));
    }
    starts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best = starts[0].clone();
    for (start_val, start) in starts.into_iter().take(cfg.refine_starts) {
        let (mut val, mut cur) = (start_val, start);
        let mut step = 0.1 * cfg.box_radius;
        for _ in 0..cfg.refine_steps {
            let mut trial = cur.clone();
            for v in trial.y.iter_mut().chain(trial.x.iter_mut()) {
                *v += random_coord(&mut rng, step);
            }
            trial.clamp(cfg);
            let tv = objective(&trial, kmax);
            evaluations += 1;
            if tv < val {
                val = tv;
                cur = trial;
                step *= 1.5;
            } else {
                step *= 0.9;
            }
            step = step.max(1e-12);
        }
        if val < best.0 {
            best = (val, cur);
        }
    }
    let (val, c) = best;
    TrivialitySearchReport {
        evaluations,
        min_max_abs_h: val,
        witness_y: c.y_modes.iter().zip(&c.y).map(|(&k, v)| (k, v.re, v.im)).collect(),
        witness_x: c.x_modes.iter().zip(&c.x).map(|(&k, v)| (k, v.re, v.im)).collect(),
    }
}
