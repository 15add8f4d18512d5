//! Inversion `a -> u` on a fixed cycle basis and finite-difference third
//! derivatives of the prepotential.
//!
//! With `b_i = ∂F/∂a^i` and `τ_ij = ∂b_i/∂a^j`, the third derivatives are
//! `∂_i ∂_j ∂_k F = ∂_k τ_ij`. Two routes are provided: first differences of
//! `τ` and second differences of `b`.

use std::cell::RefCell;
use std::collections::HashMap;

use hyperelliptic_sw::{new_curve, periods_with, CycleBasis, PeriodData, QuadOptions};
use laurent_core::C64;
use nalgebra::{DMatrix, DVector};

use crate::error::CliError;

/// Largest number of Newton iterations.
pub const NEWTON_MAX_ITER: usize = 50;

/// A dense rank-3 tensor indexed `[i][j][k]`.
pub type Tensor3 = Vec<Vec<Vec<C64>>>;

/// Allocates a zero tensor of side `g`.
pub fn zeros3(g: usize) -> Tensor3 {
    vec![vec![vec![C64::new(0.0, 0.0); g]; g]; g]
}

/// Largest entry modulus.
pub fn max_abs3(t: &Tensor3) -> f64 {
    t.iter().flatten().flatten().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Largest entrywise difference.
pub fn max_diff3(a: &Tensor3, b: &Tensor3) -> f64 {
    a.iter().flatten().flatten().zip(b.iter().flatten().flatten()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Periods at one point of `a`-space.
#[derive(Debug, Clone)]
pub struct Sample {
    pub u: Vec<C64>,
    pub periods: PeriodData,
    pub iterations: usize,
}

/// Solves `a(u) = target` by damped Newton iteration on a fixed cycle basis.
///
/// The Jacobian is `∂a^l/∂u_j = -∮_{A_l} z^{j-1} dz / y`. Convergence means
/// `max |a(u) - target| ≤ tol · max(1, max |target|)`.
#[allow(clippy::too_many_arguments)]
pub fn solve_u(
    genus: usize,
    lambda: C64,
    cycles: &CycleBasis,
    target: &[C64],
    u_start: &[C64],
    tol: f64,
    opts: &QuadOptions,
) -> Result<Sample, CliError> {
    let scale = target.iter().map(|x| x.norm()).fold(1.0, f64::max);
    let eval = |u: &[C64]| -> Result<(PeriodData, f64), CliError> {
        let curve = new_curve(genus, u, lambda)?;
        let pd = periods_with(&curve, cycles, opts)?;
        let r = pd.a.iter().zip(target).map(|(a, t)| (a - t).norm()).fold(0.0, f64::max);
        Ok((pd, r))
    };
    let mut u = u_start.to_vec();
    let (mut pd, mut res) = eval(&u)?;
    for it in 0..=NEWTON_MAX_ITER {
        if res <= tol * scale {
            return Ok(Sample { u, periods: pd, iterations: it });
        }
        if it == NEWTON_MAX_ITER {
            break;
        }
        let jac = -pd.hol_a.clone();
        let rhs = DVector::from_iterator(genus, pd.a.iter().zip(target).map(|(a, t)| t - a));
        let step = jac.lu().solve(&rhs).ok_or(CliError::NewtonFailed { residual: res, iterations: it })?;
        let mut damping = 1.0;
        loop {
            let trial: Vec<C64> = u.iter().zip(step.iter()).map(|(x, d)| x + d * damping).collect();
            match eval(&trial) {
                Ok((p, r)) if r < res => {
                    u = trial;
                    pd = p;
                    res = r;
                    break;
                }
                _ if damping > 1.0 / 64.0 => damping *= 0.5,
                _ => return Err(CliError::NewtonFailed { residual: res, iterations: it }),
            }
        }
    }
    Err(CliError::NewtonFailed { residual: res, iterations: NEWTON_MAX_ITER })
}

/// Evaluates periods at displaced points of `a`-space around a reference,
/// caching every solved point.
pub struct Sampler<'a> {
    genus: usize,
    lambda: C64,
    cycles: &'a CycleBasis,
    a0: Vec<C64>,
    u0: Vec<C64>,
    jac0_inv: DMatrix<C64>,
    tol: f64,
    opts: QuadOptions,
    cache: RefCell<HashMap<Vec<(i64, i64)>, Sample>>,
    solves: RefCell<usize>,
}

impl<'a> Sampler<'a> {
    /// A sampler around the reference `(u0, periods0)`.
    pub fn new(
        lambda: C64,
        cycles: &'a CycleBasis,
        u0: &[C64],
        periods0: &PeriodData,
        tol: f64,
        opts: QuadOptions,
    ) -> Result<Self, CliError> {
        let jac0 = -periods0.hol_a.clone();
        let jac0_inv = jac0.try_inverse().ok_or(CliError::NewtonFailed { residual: f64::NAN, iterations: 0 })?;
        Ok(Sampler {
            genus: u0.len(),
            lambda,
            cycles,
            a0: periods0.a.clone(),
            u0: u0.to_vec(),
            jac0_inv,
            tol,
            opts,
            cache: RefCell::new(HashMap::new()),
            solves: RefCell::new(0),
        })
    }

    /// Reference `a`.
    pub fn a0(&self) -> &[C64] {
        &self.a0
    }

    /// Number of Newton solves performed so far.
    pub fn solves(&self) -> usize {
        *self.solves.borrow()
    }

    /// Periods at `a0 + da`.
    pub fn at(&self, da: &[C64]) -> Result<Sample, CliError> {
        // Keys are displacements on a grid of 1e-12 so that equal stencils share solves.
        let key: Vec<(i64, i64)> = da.iter().map(|x| ((x.re * 1e12).round() as i64, (x.im * 1e12).round() as i64)).collect();
        if let Some(s) = self.cache.borrow().get(&key) {
            return Ok(s.clone());
        }
        let target: Vec<C64> = self.a0.iter().zip(da).map(|(a, d)| a + d).collect();
        let d = DVector::from_column_slice(da);
        let guess = &self.jac0_inv * d;
        let start: Vec<C64> = self.u0.iter().zip(guess.iter()).map(|(u, g)| u + g).collect();
        let s = solve_u(self.genus, self.lambda, self.cycles, &target, &start, self.tol, &self.opts)?;
        *self.solves.borrow_mut() += 1;
        self.cache.borrow_mut().insert(key, s.clone());
        Ok(s)
    }

    fn axis(&self, k: usize, h: f64) -> Vec<C64> {
        (0..self.genus).map(|i| C64::new(if i == k { h } else { 0.0 }, 0.0)).collect()
    }

    /// Central first difference of `τ` along every axis with step `h`:
    /// entry `[i][j][k] ≈ ∂_k τ_ij`.
    pub fn tau_route(&self, h: f64) -> Result<Tensor3, CliError> {
        let g = self.genus;
        let mut t = zeros3(g);
        for k in 0..g {
            let plus = self.at(&self.axis(k, h))?;
            let minus = self.at(&self.axis(k, -h))?;
            for i in 0..g {
                for j in 0..g {
                    t[i][j][k] = (plus.periods.tau[(i, j)] - minus.periods.tau[(i, j)]) / (2.0 * h);
                }
            }
        }
        Ok(t)
    }

    /// Central second difference of `b`: entry `[i][j][k] ≈ ∂_j ∂_k b_i`.
    pub fn b_route(&self, h: f64) -> Result<Tensor3, CliError> {
        let g = self.genus;
        let mut t = zeros3(g);
        let zero = vec![C64::new(0.0, 0.0); g];
        let b0 = self.at(&zero)?.periods.b;
        for j in 0..g {
            for k in j..g {
                let d2: Vec<C64> = if j == k {
                    let p = self.at(&self.axis(k, h))?.periods.b;
                    let m = self.at(&self.axis(k, -h))?.periods.b;
                    (0..g).map(|i| (p[i] - b0[i] * 2.0 + m[i]) / (h * h)).collect()
                } else {
                    let corner = |sj: f64, sk: f64| {
                        let mut d = zero.clone();
                        d[j] = C64::new(sj * h, 0.0);
                        d[k] = C64::new(sk * h, 0.0);
                        self.at(&d).map(|s| s.periods.b)
                    };
                    let (pp, pm, mp, mm) = (corner(1.0, 1.0)?, corner(1.0, -1.0)?, corner(-1.0, 1.0)?, corner(-1.0, -1.0)?);
                    (0..g).map(|i| (pp[i] - pm[i] - mp[i] + mm[i]) / (4.0 * h * h)).collect()
                };
                for i in 0..g {
                    t[i][j][k] = d2[i];
                    t[i][k][j] = d2[i];
                }
            }
        }
        Ok(t)
    }

    /// Third directional derivative `d/dt (d̂ᵀ τ(a0 + t d̂) d̂)` at `t = 0` by a central difference.
    pub fn directional(&self, dir: &[C64], h: f64) -> Result<C64, CliError> {
        let quad = |t: f64| -> Result<C64, CliError> {
            let da: Vec<C64> = dir.iter().map(|d| d * t).collect();
            let tau = self.at(&da)?.periods.tau;
            let mut v = C64::new(0.0, 0.0);
            for i in 0..self.genus {
                for j in 0..self.genus {
                    v += dir[i] * tau[(i, j)] * dir[j];
                }
            }
            Ok(v)
        };
        Ok((quad(h)? - quad(-h)?) / (2.0 * h))
    }
}

/// One Richardson level for a second-order central difference: `(4 D(h/2) - D(h)) / 3`.
pub fn richardson3(coarse: &Tensor3, fine: &Tensor3) -> Tensor3 {
    coarse
        .iter()
        .zip(fine)
        .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(c, f)| (f * 4.0 - c) / 3.0).collect()).collect())
        .collect()
}

/// Observed order `log2(|D(4h) - D(2h)| / |D(2h) - D(h)|)` from three step sizes.
pub fn observed_order(d1: &Tensor3, d2: &Tensor3, d4: &Tensor3) -> f64 {
    (max_diff3(d4, d2) / max_diff3(d2, d1)).log2()
}

/// Largest difference between `t[i][j][k]` and its index permutations, relative to `max |t|`.
pub fn symmetry_defect(t: &Tensor3) -> f64 {
    let g = t.len();
    let mut worst: f64 = 0.0;
    for i in 0..g {
        for j in 0..g {
            for k in 0..g {
                let v = t[i][j][k];
                for w in [t[j][i][k], t[k][j][i], t[i][k][j], t[j][k][i], t[k][i][j]] {
                    worst = worst.max((v - w).norm());
                }
            }
        }
    }
    worst / max_abs3(t).max(f64::MIN_POSITIVE)
}
