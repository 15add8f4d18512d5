//! Contraction of recursion outputs with the B-periods of the basis differentials.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use airy_engine::SgnTable;
use laurent_core::C64;
use nalgebra::DMatrix;

use crate::error::CliError;

/// Key `(g, n, j_1 ≤ … ≤ j_n)` of a contracted entry, with `j` counted from zero.
pub type ContractKey = (u32, u32, Vec<usize>);

/// Calls `f` on every distinct permutation of the sorted slice `items`.
fn for_each_distinct_permutation(items: &[usize], f: &mut impl FnMut(&[usize])) {
    let mut p = items.to_vec();
    loop {
        f(&p);
        let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else { return };
        let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("a larger element exists");
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

/// Calls `f` on every nondecreasing tuple of length `n` over `0..m`.
fn for_each_sorted_tuple(m: usize, n: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(m: usize, start: usize, cur: &mut Vec<usize>, n: usize, f: &mut impl FnMut(&[usize])) {
        if cur.len() == n {
            f(cur);
            return;
        }
        for j in start..m {
            cur.push(j);
            rec(m, j, cur, n, f);
            cur.pop();
        }
    }
    rec(m, 0, &mut Vec::with_capacity(n), n, f);
}

/// B-period contraction of every cell of a Bergman-basis table:
/// `∮_{B_{j_1}} … ∮_{B_{j_n}} ω_{g,n} = (2πi)^n Σ S_{g,n; f_1 … f_n} Π_m c^{f_m}_{j_m}`,
/// where the sum runs over all ordered index tuples.
///
/// `c` has one row per flat mode index and one column per cycle; the result
/// holds one entry per nondecreasing tuple `j`.
pub fn bperiod_contract(table: &SgnTable, c: &DMatrix<C64>) -> Result<BTreeMap<ContractKey, C64>, CliError> {
    if table.basis_tag() != "bergman" {
        return Err(CliError::BasisMismatch { found: table.basis_tag().to_string() });
    }
    let genus = c.ncols();
    let two_pi_i = C64::new(0.0, 2.0 * PI);
    let mut out = BTreeMap::new();
    for (g, n) in table.cells().collect::<Vec<_>>() {
        let cell = table.cell(g, n).expect("listed cell exists");
        let entries = cell.entries();
        if let Some((idx, _)) = entries.iter().find(|(idx, _)| idx.iter().any(|&f| f >= c.nrows())) {
            return Err(CliError::ShapeMismatch(format!(
                "entry {idx:?} of cell ({g},{n}) has no row in a c table with {} rows",
                c.nrows()
            )));
        }
        let prefactor = two_pi_i.powu(n);
        for_each_sorted_tuple(genus, n as usize, &mut |js| {
            let mut total = C64::new(0.0, 0.0);
            for (idx, s) in &entries {
                let mut sum = C64::new(0.0, 0.0);
                for_each_distinct_permutation(idx, &mut |perm| {
                    sum += perm.iter().zip(js).map(|(&f, &j)| c[(f, j)]).product::<C64>();
                });
                total += s * sum;
            }
            out.insert((g, n, js.to_vec()), prefactor * total);
        });
    }
    Ok(out)
}

/// Entry of a contraction at an arbitrary ordering of `js`; zero when absent.
pub fn contracted(map: &BTreeMap<ContractKey, C64>, g: u32, n: u32, js: &[usize]) -> C64 {
    let mut key = js.to_vec();
    key.sort_unstable();
    map.get(&(g, n, key)).copied().unwrap_or(C64::new(0.0, 0.0))
}
