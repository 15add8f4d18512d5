//! The local Eynard-Orantin recursion in the `ē` basis.

use std::collections::HashMap;

use serde::Serialize;

use airy_engine::{cells_up_to, computed_mode_bound, is_stable, support_bound, ModeIndex, SgnTable};
use laurent_core::{LaurentSeries, C64};

use crate::curve::LocalSpectralCurve;
use crate::error::SpectralError;

/// Output of [`eo_run`]: the coefficients of `ω_{g,n}` in the basis
/// `ē^{k_1} ⊠ ... ⊠ ē^{k_n}` together with the curve that produced them.
#[derive(Debug, Clone)]
pub struct OmegaGN {
    curve: LocalSpectralCurve,
    table: SgnTable,
    chi_max: u32,
    symmetry_defect: f64,
}

impl OmegaGN {
    pub fn curve(&self) -> &LocalSpectralCurve {
        &self.curve
    }

    /// Coefficient table with basis tag `bergman`.
    pub fn table(&self) -> &SgnTable {
        &self.table
    }

    pub fn chi_max(&self) -> u32 {
        self.chi_max
    }

    /// Largest deviation seen when an entry is recomputed from another odd
    /// first slot, together with the largest entry computed for a tuple that
    /// contains an even mode number.
    pub fn symmetry_defect(&self) -> f64 {
        self.symmetry_defect
    }
}

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

/// `-F(-z)`: the pullback of `F(z) dz` under the involution.
fn pull_back(f: &LaurentSeries) -> LaurentSeries {
    f.reflect().scale(C64::new(-1.0, 0.0))
}

/// The quadratic differentials needed below carry only exponents up to 0.
const CAP: Option<i32> = Some(0);

struct Workspace<'a> {
    curve: &'a LocalSpectralCurve,
    r: usize,
    /// `ē^f` and its pullback at each label, for flat indices below the bound.
    ebar: Vec<Vec<(LaurentSeries, LaurentSeries)>>,
    /// `1/D_α` coefficients from exponent -2 upward.
    inv_denom: Vec<Vec<C64>>,
    /// `B(z, σz)` at each label.
    b_sigma: Vec<LaurentSeries>,
    /// `ē^f(z) ē^{f'}(σz)` at each label, filled on demand.
    pairs: HashMap<(usize, usize, usize), LaurentSeries>,
    /// One-point contractions `Σ_f S_{g,|I|+1; f, I} ē^f` and their pullbacks.
    one_point: HashMap<(u32, Vec<usize>, usize), Option<(LaurentSeries, LaurentSeries)>>,
}

impl<'a> Workspace<'a> {
    fn new(curve: &'a LocalSpectralCurve, kbound: u32) -> Result<Self, SpectralError> {
        let r = curve.ram().len();
        let nflat = kbound as usize * r;
        let ebar = (0..r)
            .map(|alpha| {
                (0..nflat)
                    .map(|f| {
                        let e = curve.ebar(ModeIndex::from_flat(f, r), alpha);
                        let p = pull_back(&e);
                        (e, p)
                    })
                    .collect()
            })
            .collect();
        let depth = 2 * kbound as i32 + 4;
        let mut inv_denom = Vec::with_capacity(r);
        for alpha in 0..r {
            let inv = curve.denom(alpha).with_trunc(2 + depth).recip()?;
            inv_denom.push((-2..=depth - 2).map(|e| inv.coeff(e)).collect());
        }
        let b_sigma = (0..r).map(|alpha| curve.bergman_on_involution(alpha)).collect();
        Ok(Workspace { curve, r, ebar, inv_denom, b_sigma, pairs: HashMap::new(), one_point: HashMap::new() })
    }

    fn pair(&mut self, alpha: usize, f: usize, fp: usize) -> &LaurentSeries {
        let ebar = &self.ebar;
        self.pairs.entry((alpha, f, fp)).or_insert_with(|| ebar[alpha][f].0.mul_to(&ebar[alpha][fp].1, CAP))
    }

    /// `ω_{g, |I|+1}(z, I)` at label `alpha` as a coefficient function of `z`,
    /// or `None` when it vanishes. Includes `ω_{0,2}`.
    fn one_point(&mut self, table: &SgnTable, g: u32, idx: &[usize], alpha: usize) -> Option<(LaurentSeries, LaurentSeries)> {
        let key = (g, idx.to_vec(), alpha);
        if let Some(v) = self.one_point.get(&key) {
            return v.clone();
        }
        let n = idx.len() as u32 + 1;
        let value = if g == 0 && n == 2 {
            let f = self.curve.f_basis(ModeIndex::from_flat(idx[0], self.r), alpha);
            if f.is_exact_zero() {
                None
            } else {
                let p = pull_back(&f);
                Some((f, p))
            }
        } else if !is_stable(g, n) || table.cell(g, n).is_none() {
            None
        } else {
            let bound = computed_mode_bound(g, n) as usize * self.r;
            let mut acc = LaurentSeries::zero();
            let mut any = false;
            let mut buf = Vec::with_capacity(idx.len() + 1);
            for f in 0..bound.min(self.ebar[alpha].len()) {
                buf.clear();
                buf.push(f);
                buf.extend_from_slice(idx);
                let v = table.get_flat(g, n, &buf);
                if v.norm() > 0.0 {
                    acc = acc.linear_combination(C64::new(1.0, 0.0), &self.ebar[alpha][f].0, v);
                    any = true;
                }
            }
            if any {
                let p = pull_back(&acc);
                Some((acc, p))
            } else {
                None
            }
        };
        self.one_point.insert(key, value.clone());
        value
    }

    /// The recursion integrand `R(z) dz^2` at label `alpha` for output cell `(g, n)`
    /// and the indices `rest` of the other `n - 1` points.
    fn integrand(&mut self, table: &SgnTable, g: u32, n: u32, rest: &[usize], alpha: usize) -> LaurentSeries {
        let mut acc = LaurentSeries::zero();
        if g >= 1 {
            if g == 1 && n == 1 {
                acc = self.b_sigma[alpha].clone();
            } else if let Some(cell) = table.cell(g - 1, n + 1) {
                if !cell.is_empty() {
                    let bound = (computed_mode_bound(g - 1, n + 1) as usize * self.r).min(self.ebar[alpha].len());
                    let mut buf = Vec::with_capacity(rest.len() + 2);
                    for f in 0..bound {
                        for fp in 0..bound {
                            buf.clear();
                            buf.push(f);
                            buf.push(fp);
                            buf.extend_from_slice(rest);
                            let v = table.get_flat(g - 1, n + 1, &buf);
                            if v.norm() > 0.0 {
                                let p = self.pair(alpha, f, fp).clone();
                                acc = acc.linear_combination(C64::new(1.0, 0.0), &p, v);
                            }
                        }
                    }
                }
            }
        }
        let m = rest.len();
        let mut left = Vec::with_capacity(m);
        let mut right = Vec::with_capacity(m);
        for mask in 0u32..(1u32 << m) {
            left.clear();
            right.clear();
            for (p, &x) in rest.iter().enumerate() {
                if mask & (1 << p) != 0 {
                    left.push(x);
                } else {
                    right.push(x);
                }
            }
            for g1 in 0..=g {
                let g2 = g - g1;
                if (g1 == 0 && left.is_empty()) || (g2 == 0 && right.is_empty()) {
                    continue;
                }
                let Some((a, _)) = self.one_point(table, g1, &left, alpha) else { continue };
                let Some((_, b)) = self.one_point(table, g2, &right, alpha) else { continue };
                acc = acc.add_series(&a.mul_to(&b, CAP));
            }
        }
        acc
    }

    /// `-Res_z z^k R(z) / D_α(z)` for odd `k`.
    fn residue(&self, alpha: usize, k: u32, integrand: &LaurentSeries) -> C64 {
        let mut v = zero();
        for (p, d) in self.inv_denom[alpha].iter().enumerate() {
            let e = -1 - k as i32 - (p as i32 - 2);
            v += d * integrand.coeff(e);
        }
        -v
    }
}

/// Nondecreasing `n`-tuples from `0..pool`.
fn for_each_multiset(pool: usize, n: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(pool: usize, start: usize, cur: &mut Vec<usize>, n: usize, f: &mut impl FnMut(&[usize])) {
        if cur.len() == n {
            f(cur);
            return;
        }
        for p in start..pool {
            cur.push(p);
            rec(pool, p, cur, n, f);
            cur.pop();
        }
    }
    rec(pool, 0, &mut Vec::with_capacity(n), n, f);
}

/// Runs the recursion for every cell with `2g - 2 + n ≤ chi_max`.
///
/// `ω_{g,n}(z_0, J) = Σ_α Res_{z→α} K(z_0, z) R(z)` with kernel
/// `K(z_0, z) = -Σ_{k odd} z^k ē^{k,α}(z_0) / D_α(z) dz` and
/// `R = ω_{g-1,n+1}(z, σz, J) + Σ' ω_{g_1}(z, I) ω_{g_2}(σz, J \ I)`, where the
/// primed sum excludes `ω_{0,1}`. Every cell, including `ω_{0,3}` and `ω_{1,1}`,
/// comes out of the recursion. Entries are computed for mode numbers up to one
/// beyond the support bound `6g + 2n - 4`.
pub fn eo_run(curve: &LocalSpectralCurve, chi_max: u32) -> Result<OmegaGN, SpectralError> {
    let cells = cells_up_to(chi_max);
    let needed = cells.iter().map(|&(g, n)| computed_mode_bound(g, n)).max().unwrap_or(0);
    if needed > curve.kmax() {
        return Err(SpectralError::TruncationInsufficient { needed, kmax: curve.kmax() });
    }
    let r = curve.ram().len();
    let mut ws = Workspace::new(curve, needed)?;
    let mut table = SgnTable::new(curve.ram().clone(), "bergman", curve.kmax());
    let mut defect: f64 = 0.0;
    for &(g, n) in &cells {
        let kout = computed_mode_bound(g, n);
        let pool = kout as usize * r;
        let mut seen: HashMap<Vec<usize>, C64> = HashMap::new();
        let mut out = airy_engine::SymTensor::new(n as usize);
        let mut jobs: Vec<Vec<usize>> = Vec::new();
        for_each_multiset(pool, n as usize - 1, &mut |rest| jobs.push(rest.to_vec()));
        for rest in jobs {
            for alpha in 0..r {
                let integrand = ws.integrand(&table, g, n, &rest, alpha);
                if integrand.max_abs() == 0.0 {
                    continue;
                }
                for k in (1..=kout).step_by(2) {
                    let v = ws.residue(alpha, k, &integrand);
                    let mut full = rest.clone();
                    full.push(ModeIndex::new(k, alpha).flat(r));
                    full.sort_unstable();
                    if full.iter().any(|&f| ModeIndex::from_flat(f, r).k % 2 == 0) {
                        defect = defect.max(v.norm());
                    }
                    match seen.get(&full) {
                        Some(prev) => defect = defect.max((prev - v).norm()),
                        None => {
                            seen.insert(full.clone(), v);
                            if v.norm() > 0.0 {
                                out.set(&full, v);
                            }
                        }
                    }
                }
            }
        }
        // Tuples never reached from an odd first slot were implicitly zero.
        *table.cell_mut(g, n) = out;
    }
    Ok(OmegaGN { curve: curve.clone(), table, chi_max, symmetry_defect: defect })
}

/// Support data of one cell, as reported by [`support_bound_check`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellSupport {
    pub g: u32,
    pub n: u32,
    /// Largest mode number with an entry above the tolerance.
    pub max_mode: Option<u32>,
    /// `6g + 2n - 4`.
    pub bound: u32,
    /// Largest entry carrying an even mode number.
    pub max_even_entry: f64,
    pub within_bound: bool,
}

/// Result of [`support_bound_check`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupportReport {
    pub tol: f64,
    pub cells: Vec<CellSupport>,
}

impl SupportReport {
    /// True when every cell respects the bound and has no even entries above tolerance.
    pub fn all_ok(&self) -> bool {
        self.cells.iter().all(|c| c.within_bound && c.max_even_entry <= self.tol)
    }
}

/// Reports the largest mode number with `|coefficient| > tol` per cell against `6g + 2n - 4`.
pub fn support_bound_check(o: &OmegaGN, tol: f64) -> SupportReport {
    let cells = o
        .table
        .cells()
        .map(|(g, n)| {
            let max_mode = o.table.max_mode(g, n, tol);
            let bound = support_bound(g, n);
            CellSupport {
                g,
                n,
                max_mode,
                bound,
                max_even_entry: o.table.max_even_entry(g, n),
                within_bound: max_mode.is_none_or(|k| k <= bound),
            }
        })
        .collect();
    SupportReport { tol, cells }
}
