//! Pointwise evaluation of `ω_{g,n}`.

use airy_engine::ModeIndex;
use laurent_core::C64;

use crate::eo::OmegaGN;
use crate::error::SpectralError;

/// Calls `f` on every distinct permutation of `items`, which must be sorted.
fn for_each_distinct_permutation(items: &[usize], f: &mut impl FnMut(&[usize])) {
    let mut p = items.to_vec();
    loop {
        f(&p);
        // next lexicographic permutation
        let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else { return };
        let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("a larger element exists");
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

/// Coefficient function of `ω_{g,n}` at `points = [(label, z), ...]` in the
/// local coordinate frames: `Σ S_{g,n; k_1 ... k_n} ē^{k_1}(z_1) ... ē^{k_n}(z_n)`.
///
/// `ω_{0,2}` is the Bergman kernel of the curve. Points must lie in the
/// curve's annulus.
pub fn omega_eval(o: &OmegaGN, g: u32, n: u32, points: &[(usize, C64)]) -> Result<C64, SpectralError> {
    let curve = o.curve();
    let (r_min, r_max) = curve.annulus();
    if points.len() != n as usize {
        return Err(SpectralError::InvalidCurve(format!("{} points given for n = {n}", points.len())));
    }
    for &(alpha, z) in points {
        if alpha >= curve.ram().len() || z.norm() < r_min || z.norm() > r_max {
            return Err(SpectralError::OutOfAnnulus { alpha, z: format!("{z}"), r_min, r_max });
        }
    }
    if (g, n) == (0, 2) {
        return Ok(curve.bergman_eval(points[0].0, points[0].1, points[1].0, points[1].1));
    }
    let cell = o.table().cell(g, n).ok_or(SpectralError::MissingCell { g, n })?;
    let r = curve.ram().len();
    // ē^f(z_m) for every flat index that occurs.
    let mut cache: std::collections::HashMap<(usize, usize), C64> = std::collections::HashMap::new();
    let mut value = C64::new(0.0, 0.0);
    for (idx, s) in cell.entries() {
        let mut sum = C64::new(0.0, 0.0);
        for_each_distinct_permutation(&idx, &mut |perm| {
            let mut prod = C64::new(1.0, 0.0);
            for (m, &f) in perm.iter().enumerate() {
                let (alpha, z) = points[m];
                let e = *cache.entry((f, m)).or_insert_with(|| curve.ebar(ModeIndex::from_flat(f, r), alpha).eval(z));
                prod *= e;
            }
            sum += prod;
        });
        value += s * sum;
    }
    Ok(value)
}
