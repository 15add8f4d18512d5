//! Symplectic homology bases built from loops around consecutive branch points.


use laurent_core::C64;

use crate::contour::LoopPath;
use crate::curve::{min_pairwise_distance, SWCurve};
use crate::error::SwError;

/// Vertices per loop used for crossing detection.
const POLY_VERTICES: usize = 1024;
/// Minimal elliptic level of a foreign branch point.
const BRANCH_LEVEL_MIN: f64 = 1.25;
/// A critical point must sit at level above `BRANCH_LEVEL_MIN` or below this.
const CRITICAL_LEVEL_INSIDE: f64 = 0.6;

/// A symplectic basis `A_1..A_g, B_1..B_g` written as integer combinations of loops.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleBasis {
    /// Loop `k` encircles `chain[k]` and `chain[k+1]`.
    pub loops: Vec<LoopPath>,
    /// Branch points in chain order.
    pub chain: Vec<C64>,
    /// Intersection numbers of the lifted loops.
    pub loop_intersections: Vec<Vec<i32>>,
    /// Loop coefficients of `A_i`.
    pub a: Vec<Vec<i32>>,
    /// Loop coefficients of `B_i`.
    pub b: Vec<Vec<i32>>,
    /// Intersection matrix in the order `A_1..A_g, B_1..B_g`.
    pub intersection_matrix: Vec<Vec<i32>>,
}

impl CycleBasis {
    /// Genus.
    pub fn genus(&self) -> usize {
        self.a.len()
    }

    /// Combines per-loop integrals into `(A-periods, B-periods)`, one vector per cycle.
    pub fn combine(&self, per_loop: &[Vec<C64>]) -> (Vec<Vec<C64>>, Vec<Vec<C64>>) {
        let comb = |coef: &Vec<i32>| {
            let n = per_loop[0].len();
            let mut out = vec![C64::new(0.0, 0.0); n];
            for (k, &c) in coef.iter().enumerate() {
                if c != 0 {
                    for (o, v) in out.iter_mut().zip(&per_loop[k]) {
                        *o += v * c as f64;
                    }
                }
            }
            out
        };
        (self.a.iter().map(comb).collect(), self.b.iter().map(comb).collect())
    }

    /// Smallest distance from `z` to any loop.
    pub fn distance_to(&self, z: C64) -> f64 {
        self.loops.iter().map(|l| l.distance_to(z)).fold(f64::INFINITY, f64::min)
    }
}

fn omega(i: &[Vec<i32>], v: &[i32], w: &[i32]) -> i32 {
    let mut s = 0;
    for (k, &vk) in v.iter().enumerate() {
        if vk == 0 {
            continue;
        }
        for (l, &wl) in w.iter().enumerate() {
            s += vk * i[k][l] * wl;
        }
    }
    s
}

/// Crossings of two closed polylines: `(index in p, index in q, sign)` where
/// the sign is that of `Im(conj(t_p) t_q)`.
fn crossings(p: &[C64], q: &[C64]) -> Vec<(usize, usize, i32)> {
    let mut out = Vec::new();
    for i in 0..p.len() - 1 {
        let (p0, p1) = (p[i], p[i + 1]);
        let dp = p1 - p0;
        let (pminx, pmaxx) = (p0.re.min(p1.re), p0.re.max(p1.re));
        let (pminy, pmaxy) = (p0.im.min(p1.im), p0.im.max(p1.im));
        for j in 0..q.len() - 1 {
            let (q0, q1) = (q[j], q[j + 1]);
            if q0.re.max(q1.re) < pminx || q0.re.min(q1.re) > pmaxx || q0.im.max(q1.im) < pminy || q0.im.min(q1.im) > pmaxy {
                continue;
            }
            let dq = q1 - q0;
            let den = (dp.conj() * dq).im;
            if den == 0.0 {
                continue;
            }
            let r = q0 - p0;
            let s = (r.conj() * dq).im / den;
            let t = (r.conj() * dp).im / den;
            if (0.0..1.0).contains(&s) && (0.0..1.0).contains(&t) {
                out.push((i, j, if den > 0.0 { 1 } else { -1 }));
            }
        }
    }
    out
}

/// `y` continued along the vertices of a closed polyline starting from `y0`.
fn lift(curve: &SWCurve, poly: &[C64], y0: C64) -> Vec<C64> {
    let mut y = curve.y_near(poly[0], y0);
    poly.iter()
        .map(|&z| {
            y = curve.y_near(z, y);
            y
        })
        .collect()
}

fn loop_for(curve: &SWCurve, e1: C64, e2: C64, others: &[C64], mut h: f64) -> Result<LoopPath, SwError> {
    let len = (e2 - e1).norm();
    loop {
        let l = LoopPath::around_segment(curve, e1, e2, h);
        let branch_ok = others.iter().all(|&b| l.level(b) >= BRANCH_LEVEL_MIN);
        let crit_ok = curve.critical_points().iter().all(|&c| {
            let lv = l.level(c);
            !(CRITICAL_LEVEL_INSIDE..BRANCH_LEVEL_MIN).contains(&lv)
        });
        if branch_ok && crit_ok {
            return Ok(l);
        }
        h *= 0.8;
        if h < 1e-3 * len {
            return Err(SwError::CycleConstructionFailed(format!(
                "no clearance for the loop around {e1} and {e2}"
            )));
        }
    }
}

/// Builds loops around consecutive branch points (ordered by argument about
/// their centroid), computes their intersection numbers on the curve and
/// reduces them to a symplectic basis.
pub fn build_cycles(curve: &SWCurve) -> Result<CycleBasis, SwError> {
    let g = curve.genus();
    let bp = curve.branch_points();
    let centroid: C64 = bp.iter().sum::<C64>() / bp.len() as f64;
    let mut chain = bp.to_vec();
    chain.sort_by(|a, b| (a - centroid).arg().total_cmp(&(b - centroid).arg()));
    let d_min = min_pairwise_distance(bp);
    let mut scale = vec![1.0f64; 2 * g];
    for attempt in 0..20 {
        let mut loops = Vec::with_capacity(2 * g);
        for k in 0..2 * g {
            let (e1, e2) = (chain[k], chain[k + 1]);
            let others: Vec<C64> = chain.iter().enumerate().filter(|&(m, _)| m != k && m != k + 1).map(|(_, &z)| z).collect();
            let h0 = 0.12 * (e2 - e1).norm().min(d_min) * scale[k];
            loops.push(loop_for(curve, e1, e2, &others, h0)?);
        }
        let polys: Vec<Vec<C64>> = loops.iter().map(|l| l.polyline(POLY_VERTICES)).collect();
        let mut bad = false;
        let mut inter = vec![vec![0i32; 2 * g]; 2 * g];
        for k in 0..2 * g {
            for l in k + 1..2 * g {
                let cr = crossings(&polys[k], &polys[l]);
                let adjacent = l == k + 1;
                if (adjacent && cr.len() != 2) || (!adjacent && !cr.is_empty()) {
                    scale[k] *= 0.8;
                    scale[l] *= 0.8;
                    bad = true;
                    continue;
                }
                let yk = lift(curve, &polys[k], loops[k].y_start);
                let yl = lift(curve, &polys[l], loops[l].y_start);
                let mut s = 0;
                for (i, j, sign) in cr {
                    if (yk[i] - yl[j]).norm() < (yk[i] + yl[j]).norm() {
                        s += sign;
                    }
                }
                inter[k][l] = s;
                inter[l][k] = -s;
            }
        }
        if bad {
            if attempt == 19 {
                break;
            }
            continue;
        }
        let (a, b) = symplectic_reduce(&inter, g)?;
        let basis: Vec<&Vec<i32>> = a.iter().chain(b.iter()).collect();
        let im: Vec<Vec<i32>> = basis.iter().map(|v| basis.iter().map(|w| omega(&inter, v, w)).collect()).collect();
        for (r, row) in im.iter().enumerate() {
            for (s, &x) in row.iter().enumerate() {
                let expected = if r < g && s == r + g {
                    1
                } else if r >= g && s + g == r {
                    -1
                } else {
                    0
                };
                if x != expected {
                    return Err(SwError::CycleConstructionFailed(format!("intersection matrix is not symplectic: {im:?}")));
                }
            }
        }
        return Ok(CycleBasis { loops, chain, loop_intersections: inter, a, b, intersection_matrix: im });
    }
    Err(SwError::CycleConstructionFailed("loops around non-adjacent branch-point pairs cross".into()))
}

/// Symplectic Gram-Schmidt over the integers on the loop lattice.
fn symplectic_reduce(inter: &[Vec<i32>], g: usize) -> Result<(Vec<Vec<i32>>, Vec<Vec<i32>>), SwError> {
    let n = inter.len();
    let mut pool: Vec<Vec<i32>> = (0..n).map(|k| (0..n).map(|l| i32::from(k == l)).collect()).collect();
    let mut a = Vec::with_capacity(g);
    let mut b = Vec::with_capacity(g);
    for _ in 0..g {
        let mut found = None;
        'search: for p in 0..pool.len() {
            for q in p + 1..pool.len() {
                let w = omega(inter, &pool[p], &pool[q]);
                if w == 1 || w == -1 {
                    found = Some((p, q, w));
                    break 'search;
                }
            }
        }
        let (p, q, w) = found.ok_or_else(|| SwError::CycleConstructionFailed("no unimodular loop pair left".into()))?;
        let ai = pool[p].clone();
        let bi: Vec<i32> = pool[q].iter().map(|x| x * w).collect();
        pool.remove(q);
        pool.remove(p);
        for z in pool.iter_mut() {
            let za = omega(inter, z, &ai);
            let zb = omega(inter, z, &bi);
            for k in 0..n {
                z[k] += -zb * ai[k] + za * bi[k];
            }
        }
        a.push(ai);
        b.push(bi);
    }
    Ok((a, b))
}
