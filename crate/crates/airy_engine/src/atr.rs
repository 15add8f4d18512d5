//! Abstract topological recursion and the table of its outputs `S_{g,n}`.

use std::collections::{BTreeMap, HashMap};

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use laurent_core::C64;

use crate::error::AiryError;
use crate::index::{mode_of, ModeIndex, RamLabels};
use crate::tensors::AiryTensors;

/// Largest number of slots a table key can hold.
pub const MAX_SLOTS: usize = 16;

/// Largest flat index a table key can hold.
pub const MAX_FLAT_INDEX: usize = 254;

/// Bound `6g + 2n - 4` on the mode numbers carried by `S_{g,n}`.
pub fn support_bound(g: u32, n: u32) -> u32 {
    (6 * g + 2 * n).saturating_sub(4)
}

/// True when `2g - 2 + n > 0`.
pub fn is_stable(g: u32, n: u32) -> bool {
    2 * g + n > 2
}

/// Packs a sorted list of flat indices into a hash key.
fn pack(sorted: &[usize]) -> u128 {
    debug_assert!(sorted.len() <= MAX_SLOTS);
    sorted.iter().fold(0u128, |acc, &f| {
        debug_assert!(f <= MAX_FLAT_INDEX);
        (acc << 8) | (f as u128 + 1)
    })
}

fn unpack(mut key: u128, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for slot in out.iter_mut().rev() {
        *slot = (key & 0xff) as usize - 1;
        key >>= 8;
    }
    out
}

/// A symmetric tensor stored by sorted flat index tuples; absent entries are zero.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SymTensor {
    n: usize,
    entries: HashMap<u128, C64>,
}

impl SymTensor {
    /// An empty tensor with `n` slots.
    pub fn new(n: usize) -> Self {
        assert!(n <= MAX_SLOTS, "at most {MAX_SLOTS} slots are supported");
        SymTensor { n, entries: HashMap::new() }
    }

    /// Number of slots.
    pub fn arity(&self) -> usize {
        self.n
    }

    /// Value at an arbitrary ordering of flat indices.
    pub fn get(&self, idx: &[usize]) -> C64 {
        let mut s = idx.to_vec();
        s.sort_unstable();
        self.entries.get(&pack(&s)).copied().unwrap_or(C64::new(0.0, 0.0))
    }

    /// Stores a value; exact zeros are not stored.
    pub fn set(&mut self, idx: &[usize], v: C64) {
        assert_eq!(idx.len(), self.n, "wrong number of indices");
        let mut s = idx.to_vec();
        s.sort_unstable();
        let key = pack(&s);
        if v.norm() > 0.0 {
            self.entries.insert(key, v);
        } else {
            self.entries.remove(&key);
        }
    }

    /// Stored entries as sorted flat tuples, in lexicographic order.
    pub fn entries(&self) -> Vec<(Vec<usize>, C64)> {
        let mut v: Vec<(Vec<usize>, C64)> = self.entries.iter().map(|(k, x)| (unpack(*k, self.n), *x)).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    /// Number of stored entries.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// True when nothing is stored.
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// One serialized table row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SgnRow {
    pub g: u32,
    pub n: u32,
    pub indices: String,
    pub re: f64,
    pub im: f64,
}

/// The outputs `S_{g,n}` of a recursion, keyed by `(g, n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SgnTable {
    ram: RamLabels,
    basis_tag: String,
    kmax: u32,
    cells: BTreeMap<(u32, u32), SymTensor>,
}

impl SgnTable {
    /// An empty table.
    pub fn new(ram: RamLabels, basis_tag: &str, kmax: u32) -> Self {
        SgnTable { ram, basis_tag: basis_tag.to_string(), kmax, cells: BTreeMap::new() }
    }

    /// Label set.
    pub fn ram(&self) -> &RamLabels {
        &self.ram
    }

    /// Tag naming the basis the indices refer to.
    pub fn basis_tag(&self) -> &str {
        &self.basis_tag
    }

    /// Index bound of the underlying tensors.
    pub fn kmax(&self) -> u32 {
        self.kmax
    }

    /// The `(g, n)` cells present, in increasing order.
    pub fn cells(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.cells.keys().copied()
    }

    /// The tensor of cell `(g, n)`.
    pub fn cell(&self, g: u32, n: u32) -> Option<&SymTensor> {
        self.cells.get(&(g, n))
    }

    /// Mutable access to cell `(g, n)`, created empty when missing.
    pub fn cell_mut(&mut self, g: u32, n: u32) -> &mut SymTensor {
        self.cells.entry((g, n)).or_insert_with(|| SymTensor::new(n as usize))
    }

    /// `S_{g,n}` at flat indices; zero for missing cells.
    pub fn get_flat(&self, g: u32, n: u32, idx: &[usize]) -> C64 {
        self.cells.get(&(g, n)).map_or(C64::new(0.0, 0.0), |t| t.get(idx))
    }

    /// `S_{g,n}` at mode indices; zero for missing cells.
    pub fn get(&self, g: u32, n: u32, idx: &[ModeIndex]) -> C64 {
        let r = self.ram.len();
        let flat: Vec<usize> = idx.iter().map(|m| m.flat(r)).collect();
        self.get_flat(g, n, &flat)
    }

    /// Largest mode number carried by an entry of modulus above `tol`.
    pub fn max_mode(&self, g: u32, n: u32, tol: f64) -> Option<u32> {
        let r = self.ram.len();
        self.cells.get(&(g, n))?.entries().iter().filter(|(_, v)| v.norm() > tol).flat_map(|(k, _)| k.iter().map(|&f| mode_of(f, r)).collect::<Vec<_>>()).max()
    }

    /// Largest modulus of an entry that carries an even mode number.
    pub fn max_even_entry(&self, g: u32, n: u32) -> f64 {
        let r = self.ram.len();
        self.cells.get(&(g, n)).map_or(0.0, |t| {
            t.entries().iter().filter(|(k, _)| k.iter().any(|&f| mode_of(f, r) % 2 == 0)).map(|(_, v)| v.norm()).fold(0.0, f64::max)
        })
    }

    /// Largest componentwise difference to another table over the union of cells.
    pub fn max_abs_difference(&self, other: &SgnTable) -> f64 {
        let mut keys: Vec<(u32, u32)> = self.cells.keys().chain(other.cells.keys()).copied().collect();
        keys.sort_unstable();
        keys.dedup();
        let mut worst: f64 = 0.0;
        for (g, n) in keys {
            let a = self.cells.get(&(g, n)).map(|t| t.entries()).unwrap_or_default();
            let b = other.cells.get(&(g, n)).map(|t| t.entries()).unwrap_or_default();
            for (idx, v) in &a {
                worst = worst.max((v - other.get_flat(g, n, idx)).norm());
            }
            for (idx, v) in &b {
                worst = worst.max((v - self.get_flat(g, n, idx)).norm());
            }
        }
        worst
    }

    fn format_indices(&self, idx: &[usize]) -> String {
        let r = self.ram.len();
        let parts: Vec<String> = idx.iter().map(|&f| self.ram.format_mode(ModeIndex::from_flat(f, r))).collect();
        format!("({})", parts.join(";"))
    }

    /// All rows `(g, n, indices, re, im)` in a stable order.
    pub fn rows(&self) -> Vec<SgnRow> {
        let mut out = Vec::new();
        for (&(g, n), t) in &self.cells {
            for (idx, v) in t.entries() {
                // Adding 0.0 turns a negative zero into a positive one.
                out.push(SgnRow { g, n, indices: self.format_indices(&idx), re: v.re + 0.0, im: v.im + 0.0 });
            }
        }
        out
    }

    /// CSV dump with header `g,n,indices,re,im`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("g,n,indices,re,im\n");
        for r in self.rows() {
            s.push_str(&format!("{},{},{},{},{}\n", r.g, r.n, r.indices, r.re, r.im));
        }
        s
    }

    /// JSON dump with the basis tag, labels and all rows.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "basis_tag": self.basis_tag,
            "labels": self.ram,
            "kmax": self.kmax,
            "rows": self.rows(),
        })
    }
}

/// Contraction data of the tensors in sparse row form.
struct Contractions {
    dim: usize,
    /// `b_rows[i1 * dim + ik]` lists `(j, b_{i1 ik}^j)`.
    b_rows: Vec<Vec<(usize, C64)>>,
    /// `c_rows[i1]` lists `(j1, j2, c_{i1}^{j1 j2})` over ordered pairs.
    c_rows: Vec<Vec<(usize, usize, C64)>>,
    /// True when no `b` or `c` entry has first index `i`.
    zero_row: Vec<bool>,
}

impl Contractions {
    fn new(t: &AiryTensors) -> Self {
        let d = t.dim();
        let mut b_rows = vec![Vec::new(); d * d];
        let mut c_rows = vec![Vec::new(); d];
        for ([i, j, k], v) in t.b_entries() {
            b_rows[i * d + j].push((k, v));
        }
        for ([i, j, k], v) in t.c_entries() {
            c_rows[i].push((j, k, v));
            if j != k {
                c_rows[i].push((k, j, v));
            }
        }
        let zero_row = (0..d).map(|i| c_rows[i].is_empty() && (0..d).all(|j| b_rows[i * d + j].is_empty())).collect();
        Contractions { dim: d, b_rows, c_rows, zero_row }
    }
}

fn without(v: &[usize], k: usize) -> Vec<usize> {
    v.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, x)| *x).collect()
}

/// One recursion entry `S_{g,n; i_1 ...}` with `idx[0]` as the distinguished index.
fn atr_entry(cx: &Contractions, table: &SgnTable, g: u32, n: u32, idx: &[usize]) -> C64 {
    let i1 = idx[0];
    let rest = &idx[1..];
    let mut sum = C64::new(0.0, 0.0);
    let mut buf: Vec<usize> = Vec::with_capacity(n as usize + 1);
    // 2 Σ_k Σ_j b_{i1 ik}^j S_{g,n-1; j, rest \ ik}
    if is_stable(g, n - 1) {
        for k in 0..rest.len() {
            let others = without(rest, k);
            for &(j, bv) in &cx.b_rows[i1 * cx.dim + rest[k]] {
                buf.clear();
                buf.push(j);
                buf.extend_from_slice(&others);
                let sv = table.get_flat(g, n - 1, &buf);
                if sv.norm() > 0.0 {
                    sum += bv * sv * 2.0;
                }
            }
        }
    }
    // Σ_{splits} c_{i1}^{j1 j2} S_{g1, 1+|I1|; j1 I1} S_{g2, 1+|I2|; j2 I2}
    let m = rest.len();
    let mut left = Vec::with_capacity(m + 1);
    let mut right = Vec::with_capacity(m + 1);
    for mask in 0u32..(1u32 << m) {
        let size1 = mask.count_ones();
        let (n1, n2) = (1 + size1, 1 + m as u32 - size1);
        for g1 in 0..=g {
            let g2 = g - g1;
            if !is_stable(g1, n1) || !is_stable(g2, n2) {
                continue;
            }
            for &(j1, j2, cv) in &cx.c_rows[i1] {
                left.clear();
                right.clear();
                left.push(j1);
                right.push(j2);
                for (p, &x) in rest.iter().enumerate() {
                    if mask & (1 << p) != 0 {
                        left.push(x);
                    } else {
                        right.push(x);
                    }
                }
                let s1 = table.get_flat(g1, n1, &left);
                if s1.norm() == 0.0 {
                    continue;
                }
                let s2 = table.get_flat(g2, n2, &right);
                sum += cv * s1 * s2;
            }
        }
    }
    // Σ c_{i1}^{j1 j2} S_{g-1, n+1; j1 j2 rest}
    if g >= 1 {
        for &(j1, j2, cv) in &cx.c_rows[i1] {
            buf.clear();
            buf.push(j1);
            buf.push(j2);
            buf.extend_from_slice(rest);
            let sv = table.get_flat(g - 1, n + 1, &buf);
            if sv.norm() > 0.0 {
                sum += cv * sv;
            }
        }
    }
    sum
}

/// Calls `f` on every nondecreasing `n`-tuple drawn from `pool`.
fn for_each_multiset(pool: &[usize], n: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(pool: &[usize], start: usize, cur: &mut Vec<usize>, n: usize, f: &mut impl FnMut(&[usize])) {
        if cur.len() == n {
            f(cur);
            return;
        }
        for p in start..pool.len() {
            cur.push(pool[p]);
            rec(pool, p, cur, n, f);
            cur.pop();
        }
    }
    rec(pool, 0, &mut Vec::with_capacity(n), n, f);
}

/// The `(g, n)` cells with `n ≥ 1` and `1 ≤ 2g - 2 + n ≤ chi_max`, ordered by `2g - 2 + n`.
pub fn cells_up_to(chi_max: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for chi in 1..=chi_max {
        for g in 0..=(chi + 1) / 2 {
            if chi + 2 > 2 * g {
                let n = chi + 2 - 2 * g;
                if n >= 1 {
                    out.push((g, n));
                }
            }
        }
    }
    out
}

/// Largest mode number computed for cell `(g, n)`: the support bound plus one
/// so that the first mode beyond the bound is checked.
pub fn computed_mode_bound(g: u32, n: u32) -> u32 {
    support_bound(g, n) + 1
}

/// Runs the abstract topological recursion for all `2g - 2 + n ≤ chi_max`.
///
/// Initial data `S_{0,3} = 2A` and `S_{1,1} = ε`. Entries are computed for mode
/// numbers up to `6g + 2n - 3`, one beyond the support bound. A flat index whose
/// `B` and `C` rows vanish forces the entry to zero, because the recursion may
/// start from any slot of a symmetric output.
pub fn atr_run(t: &AiryTensors, chi_max: u32) -> Result<SgnTable, AiryError> {
    let cells = cells_up_to(chi_max);
    let r = t.ram().len();
    let needed = cells.iter().map(|&(g, n)| computed_mode_bound(g, n)).max().unwrap_or(0);
    if needed > t.kmax() {
        return Err(AiryError::TruncationInsufficient { needed, kmax: t.kmax() });
    }
    if t.dim() > MAX_FLAT_INDEX + 1 {
        return Err(AiryError::ShapeMismatch(format!("at most {} flat indices are supported", MAX_FLAT_INDEX + 1)));
    }
    let cx = Contractions::new(t);
    let mut table = SgnTable::new(t.ram().clone(), "airy", t.kmax());
    for ([i, j, k], v) in t.a_entries() {
        table.cell_mut(0, 3).set(&[i, j, k], v * 2.0);
    }
    table.cell_mut(1, 1);
    for (i, v) in t.eps_entries() {
        table.cell_mut(1, 1).set(&[i], v);
    }
    for &(g, n) in &cells {
        if (g, n) == (0, 3) || (g, n) == (1, 1) {
            continue;
        }
        let bound = computed_mode_bound(g, n) as usize * r;
        let pool: Vec<usize> = (0..bound).filter(|&i| !cx.zero_row[i]).collect();
        let mut out = SymTensor::new(n as usize);
        for_each_multiset(&pool, n as usize, &mut |idx| {
            let v = atr_entry(&cx, &table, g, n, idx);
            if v.norm() > 0.0 {
                out.set(idx, v);
            }
        });
        table.cells.insert((g, n), out);
    }
    Ok(table)
}

/// Result of [`atr_symmetry_defect`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetryReport {
    /// Largest absolute deviation found.
    pub max_defect: f64,
    /// Number of (tuple, slot) recomputations performed.
    pub evaluations: usize,
}

/// Recomputes entries with every admissible slot moved to the front and
/// compares with the stored values.
///
/// Cells with at most `sample_cap` sorted tuples are checked exhaustively; a
/// seeded sample of `sample_cap` tuples is drawn otherwise. Tuples containing
/// an index with vanishing tensor rows are included, which also checks that
/// such entries are zero from every other starting slot.
pub fn atr_symmetry_defect(t: &AiryTensors, table: &SgnTable, sample_cap: usize, seed: u64) -> SymmetryReport {
    let cx = Contractions::new(t);
    let r = t.ram().len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SymmetryReport { max_defect: 0.0, evaluations: 0 };
    let cell_list: Vec<(u32, u32)> = table.cells().collect();
    for (g, n) in cell_list {
        if (g, n) == (0, 3) || (g, n) == (1, 1) {
            continue;
        }
        let bound = (computed_mode_bound(g, n).min(t.kmax()) as usize) * r;
        let pool: Vec<usize> = (0..bound).collect();
        let mut tuples = Vec::new();
        for_each_multiset(&pool, n as usize, &mut |idx| tuples.push(idx.to_vec()));
        let chosen: Vec<Vec<usize>> = if tuples.len() <= sample_cap {
            tuples
        } else {
            sample(&mut rng, tuples.len(), sample_cap).into_iter().map(|i| tuples[i].clone()).collect()
        };
        for tup in chosen {
            let stored = table.get_flat(g, n, &tup);
            let mut seen = Vec::new();
            for p in 0..tup.len() {
                if seen.contains(&tup[p]) || cx.zero_row[tup[p]] {
                    continue;
                }
                seen.push(tup[p]);
                let mut order = vec![tup[p]];
                order.extend(without(&tup, p));
                let v = atr_entry(&cx, table, g, n, &order);
                report.max_defect = report.max_defect.max((v - stored).norm());
                report.evaluations += 1;
            }
        }
    }
    report
}
