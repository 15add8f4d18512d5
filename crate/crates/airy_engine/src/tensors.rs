//! Sparse tensors `(A, B, C, ε)` of quadratic Hamiltonians
//! `H_i = -y_i + a_ijk x^j x^k + 2 b_ij^k x^j y_k + c_i^jk y_j y_k`.

use std::collections::BTreeMap;

use laurent_core::{SeriesDifferential, C64};

use crate::index::{ModeIndex, RamLabels};

/// Relative tolerance used when checking index symmetries of dense tensors.
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Tensor data over the flat index set `{(k, α) : 1 ≤ k ≤ kmax}`.
///
/// `A` and `C` are stored under sorted keys (`A` fully symmetric, `C` symmetric
/// in its upper pair). `B` has no symmetry and is stored with key `(i, j, k)`
/// for `b_ij^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct AiryTensors {
    ram: RamLabels,
    kmax: u32,
    a: BTreeMap<[usize; 3], C64>,
    b: BTreeMap<[usize; 3], C64>,
    c: BTreeMap<[usize; 3], C64>,
    eps: BTreeMap<usize, C64>,
}

/// Dense copy of [`AiryTensors`], row-major with dimension `dim` per slot.
///
/// Layouts: `a[(i*d + j)*d + k] = a_ijk`, `b[(i*d + j)*d + k] = b_ij^k`,
/// `c[(i*d + j)*d + k] = c_i^jk`, `eps[i] = ε_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensors {
    pub dim: usize,
    pub a: Vec<C64>,
    pub b: Vec<C64>,
    pub c: Vec<C64>,
    pub eps: Vec<C64>,
}

impl DenseTensors {
    /// All-zero tensors of dimension `dim`.
    pub fn zeros(dim: usize) -> Self {
        let z = C64::new(0.0, 0.0);
        DenseTensors { dim, a: vec![z; dim * dim * dim], b: vec![z; dim * dim * dim], c: vec![z; dim * dim * dim], eps: vec![z; dim] }
    }

    /// Offset of `(i, j, k)` in a cubic array.
    pub fn at(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dim + j) * self.dim + k
    }
}

fn push_nonzero<K: Ord>(map: &mut BTreeMap<K, C64>, key: K, v: C64) {
    if v.norm() > 0.0 {
        map.insert(key, v);
    }
}

impl AiryTensors {
    /// Empty tensors for the given labels and index bound.
    pub fn empty(ram: RamLabels, kmax: u32) -> Self {
        AiryTensors { ram, kmax, a: BTreeMap::new(), b: BTreeMap::new(), c: BTreeMap::new(), eps: BTreeMap::new() }
    }

    /// Builds sparse tensors from dense arrays.
    ///
    /// Returns the largest relative symmetry defect found in `A` and in the
    /// upper pair of `C`; the stored values are the symmetrized averages.
    pub fn from_dense(ram: RamLabels, kmax: u32, dense: &DenseTensors) -> (Self, f64) {
        let d = dense.dim;
        assert_eq!(d, kmax as usize * ram.len(), "dense dimension does not match labels and kmax");
        let mut t = Self::empty(ram, kmax);
        let scale = dense.a.iter().chain(dense.c.iter()).map(|x| x.norm()).fold(1e-300, f64::max);
        let mut defect: f64 = 0.0;
        for i in 0..d {
            for j in i..d {
                for k in j..d {
                    let perms = [(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)];
                    let vals: Vec<C64> = perms.iter().map(|&(p, q, r)| dense.a[dense.at(p, q, r)]).collect();
                    let mean = vals.iter().sum::<C64>() / 6.0;
                    for v in &vals {
                        defect = defect.max((v - mean).norm() / scale);
                    }
                    push_nonzero(&mut t.a, [i, j, k], mean);
                }
            }
        }
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    push_nonzero(&mut t.b, [i, j, k], dense.b[dense.at(i, j, k)]);
                }
                for k in j..d {
                    let v1 = dense.c[dense.at(i, j, k)];
                    let v2 = dense.c[dense.at(i, k, j)];
                    defect = defect.max((v1 - v2).norm() / scale);
                    push_nonzero(&mut t.c, [i, j, k], (v1 + v2) / 2.0);
                }
            }
            push_nonzero(&mut t.eps, i, dense.eps[i]);
        }
        (t, defect)
    }

    /// Dense copy of the tensors.
    pub fn dense(&self) -> DenseTensors {
        let d = self.dim();
        let mut out = DenseTensors::zeros(d);
        for (&[i, j, k], &v) in &self.a {
            for (p, q, r) in [(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)] {
                let o = out.at(p, q, r);
                out.a[o] = v;
            }
        }
        for (&[i, j, k], &v) in &self.b {
            let o = out.at(i, j, k);
            out.b[o] = v;
        }
        for (&[i, j, k], &v) in &self.c {
            let o1 = out.at(i, j, k);
            let o2 = out.at(i, k, j);
            out.c[o1] = v;
            out.c[o2] = v;
        }
        for (&i, &v) in &self.eps {
            out.eps[i] = v;
        }
        out
    }

    /// Label set.
    pub fn ram(&self) -> &RamLabels {
        &self.ram
    }

    /// Largest mode number `k` represented.
    pub fn kmax(&self) -> u32 {
        self.kmax
    }

    /// Number of flat indices, `kmax * |Ram|`.
    pub fn dim(&self) -> usize {
        self.kmax as usize * self.ram.len()
    }

    fn flat(&self, m: ModeIndex) -> Option<usize> {
        (m.k <= self.kmax && m.alpha < self.ram.len()).then(|| m.flat(self.ram.len()))
    }

    fn lookup(map: &BTreeMap<[usize; 3], C64>, key: [usize; 3]) -> C64 {
        map.get(&key).copied().unwrap_or(C64::new(0.0, 0.0))
    }

    /// `a_ijk` by flat index.
    pub fn a_flat(&self, i: usize, j: usize, k: usize) -> C64 {
        let mut key = [i, j, k];
        key.sort_unstable();
        Self::lookup(&self.a, key)
    }

    /// `b_ij^k` by flat index.
    pub fn b_flat(&self, i: usize, j: usize, k: usize) -> C64 {
        Self::lookup(&self.b, [i, j, k])
    }

    /// `c_i^jk` by flat index.
    pub fn c_flat(&self, i: usize, j: usize, k: usize) -> C64 {
        Self::lookup(&self.c, [i, j.min(k), j.max(k)])
    }

    /// `ε_i` by flat index.
    pub fn eps_flat(&self, i: usize) -> C64 {
        self.eps.get(&i).copied().unwrap_or(C64::new(0.0, 0.0))
    }

    /// `a_ijk`; zero outside the index bound.
    pub fn a(&self, i: ModeIndex, j: ModeIndex, k: ModeIndex) -> C64 {
        match (self.flat(i), self.flat(j), self.flat(k)) {
            (Some(p), Some(q), Some(r)) => self.a_flat(p, q, r),
            _ => C64::new(0.0, 0.0),
        }
    }

    /// `b_ij^k`; zero outside the index bound.
    pub fn b(&self, i: ModeIndex, j: ModeIndex, k: ModeIndex) -> C64 {
        match (self.flat(i), self.flat(j), self.flat(k)) {
            (Some(p), Some(q), Some(r)) => self.b_flat(p, q, r),
            _ => C64::new(0.0, 0.0),
        }
    }

    /// `c_i^jk`; zero outside the index bound.
    pub fn c(&self, i: ModeIndex, j: ModeIndex, k: ModeIndex) -> C64 {
        match (self.flat(i), self.flat(j), self.flat(k)) {
            (Some(p), Some(q), Some(r)) => self.c_flat(p, q, r),
            _ => C64::new(0.0, 0.0),
        }
    }

    /// `ε_i`; zero outside the index bound.
    pub fn eps(&self, i: ModeIndex) -> C64 {
        self.flat(i).map_or(C64::new(0.0, 0.0), |p| self.eps_flat(p))
    }

    /// Structure constant `g_ij^k = 2(b_ij^k - b_ji^k)`.
    pub fn structure_constant(&self, i: ModeIndex, j: ModeIndex, k: ModeIndex) -> C64 {
        (self.b(i, j, k) - self.b(j, i, k)) * 2.0
    }

    /// Nonzero entries of `A` under sorted keys.
    pub fn a_entries(&self) -> impl Iterator<Item = ([usize; 3], C64)> + '_ {
        self.a.iter().map(|(k, v)| (*k, *v))
    }

    /// Nonzero entries of `B` as `((i, j, k), b_ij^k)`.
    pub fn b_entries(&self) -> impl Iterator<Item = ([usize; 3], C64)> + '_ {
        self.b.iter().map(|(k, v)| (*k, *v))
    }

    /// Nonzero entries of `C` as `((i, j, k), c_i^jk)` with `j ≤ k`.
    pub fn c_entries(&self) -> impl Iterator<Item = ([usize; 3], C64)> + '_ {
        self.c.iter().map(|(k, v)| (*k, *v))
    }

    /// Nonzero entries of `ε`.
    pub fn eps_entries(&self) -> impl Iterator<Item = (usize, C64)> + '_ {
        self.eps.iter().map(|(k, v)| (*k, *v))
    }

    /// Largest absolute componentwise difference to `other`.
    pub fn max_difference(&self, other: &AiryTensors) -> f64 {
        assert_eq!(self.dim(), other.dim(), "tensor dimensions differ");
        let (x, y) = (self.dense(), other.dense());
        let diff = |p: &[C64], q: &[C64]| p.iter().zip(q).map(|(u, v)| (u - v).norm()).fold(0.0, f64::max);
        diff(&x.a, &y.a).max(diff(&x.b, &y.b)).max(diff(&x.c, &y.c)).max(diff(&x.eps, &y.eps))
    }

    /// Restriction to flat indices whose mode number is odd.
    pub fn odd_restriction(&self) -> AiryTensors {
        let r = self.ram.len();
        let odd = |f: &usize| (f / r) % 2 == 0;
        let keep3 = |k: &[usize; 3]| k.iter().all(odd);
        AiryTensors {
            ram: self.ram.clone(),
            kmax: self.kmax,
            a: self.a.iter().filter(|(k, _)| keep3(k)).map(|(k, v)| (*k, *v)).collect(),
            b: self.b.iter().filter(|(k, _)| keep3(k)).map(|(k, v)| (*k, *v)).collect(),
            c: self.c.iter().filter(|(k, _)| keep3(k)).map(|(k, v)| (*k, *v)).collect(),
            eps: self.eps.iter().filter(|(k, _)| odd(k)).map(|(k, v)| (*k, *v)).collect(),
        }
    }
}

/// Which residue presentation to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Variant {
    /// The residue-constraint Hamiltonians.
    ResidueConstraints,
    /// The variant whose third factor is pulled back by `z -> -z`.
    TrVariant,
}

/// Which of `f_k` or `e^k` enters a residue formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    F(i32),
    E(i32),
}

fn slot_form(s: Slot) -> SeriesDifferential {
    match s {
        Slot::F(k) => SeriesDifferential::f_basis(k),
        Slot::E(k) => SeriesDifferential::e_basis(k),
    }
}

/// `σ Res(f_i · u · v / (z dz^2)) / (4i)` for odd `i`, zero for even `i`.
///
/// For the residue constraints `σ = +1` and `v` enters as is. For the variant
/// `σ = -1` and `v` is pulled back under `z -> -z`.
fn residue_formula(i: u32, u: Slot, v: Slot, variant: Variant) -> C64 {
    if i % 2 == 0 {
        return C64::new(0.0, 0.0);
    }
    let fi = SeriesDifferential::f_basis(i as i32);
    let third = slot_form(v);
    let (sign, third) = match variant {
        Variant::ResidueConstraints => (1.0, third),
        Variant::TrVariant => (-1.0, third.pullback_neg()),
    };
    let prod = &(&fi.base * &slot_form(u).base) * &third.base;
    let integrand = SeriesDifferential::new(prod.shift(-1));
    let res = integrand.residue().expect("exact monomial products have known residues");
    res * (sign / (4.0 * i as f64))
}

/// Dense tensors evaluated entry by entry from the residue presentation.
///
/// No symmetry is imposed, so the output can be used to check the index
/// symmetries of the formulas themselves. `ε` is set to `ε_3 = 1/16` in every
/// block since it has no residue presentation.
pub fn residue_formula_dense(kmax: u32, ram: &RamLabels, variant: Variant) -> DenseTensors {
    let r = ram.len();
    let mut out = DenseTensors::zeros(kmax as usize * r);
    for alpha in 0..r {
        let f = |k: u32| ModeIndex::new(k, alpha).flat(r);
        for i in 1..=kmax {
            for j in 1..=kmax {
                for k in 1..=kmax {
                    let (jj, kk) = (j as i32, k as i32);
                    let o = out.at(f(i), f(j), f(k));
                    out.a[o] = residue_formula(i, Slot::F(jj), Slot::F(kk), variant);
                    out.b[o] = residue_formula(i, Slot::F(jj), Slot::E(kk), variant);
                    out.c[o] = residue_formula(i, Slot::E(jj), Slot::E(kk), variant);
                }
            }
        }
        out.eps[f(3)] = C64::new(1.0 / 16.0, 0.0);
    }
    out
}

fn build_from_residues(kmax: u32, ram: &RamLabels, variant: Variant) -> AiryTensors {
    AiryTensors::from_dense(ram.clone(), kmax, &residue_formula_dense(kmax, ram, variant)).0
}

/// Residue-constraint tensors from their closed forms, block-diagonal in the label.
///
/// `a_111 = 1/4`, `b_ij^k = j/4` for odd `i` with `i + j = k + 3`,
/// `c_i^jk = 1/4` for odd `i = j + k + 3`, `ε_3 = 1/16`.
pub fn build_residue_constraint_tensors(kmax: u32, ram: &RamLabels) -> AiryTensors {
    assert!(kmax >= 5, "index bound must be at least 5");
    let mut t = AiryTensors::empty(ram.clone(), kmax);
    let r = ram.len();
    let quarter = C64::new(0.25, 0.0);
    for alpha in 0..r {
        let f = |k: u32| ModeIndex::new(k, alpha).flat(r);
        t.a.insert([f(1); 3], quarter);
        for i in (1..=kmax).step_by(2) {
            for j in 1..=kmax {
                if i + j >= 4 && i + j - 3 <= kmax {
                    t.b.insert([f(i), f(j), f(i + j - 3)], C64::new(j as f64 / 4.0, 0.0));
                }
                for k in j..=kmax {
                    if i == j + k + 3 {
                        t.c.insert([f(i), f(j), f(k)], quarter);
                    }
                }
            }
        }
        t.eps.insert(f(3), C64::new(1.0 / 16.0, 0.0));
    }
    t
}

/// Residue-constraint tensors evaluated from the residue presentation
/// `Res(f_i f_j f_k / (z dz^2)) / (4i)` and its `B`, `C` analogues.
pub fn residue_formula_tensors(kmax: u32, ram: &RamLabels) -> AiryTensors {
    assert!(kmax >= 5, "index bound must be at least 5");
    build_from_residues(kmax, ram, Variant::ResidueConstraints)
}

/// Tensors of the variant Hamiltonians, evaluated by series residues with the
/// third slot pulled back under `z -> -z`.
pub fn build_tr_variant_tensors(kmax: u32, ram: &RamLabels) -> AiryTensors {
    assert!(kmax >= 5, "index bound must be at least 5");
    build_from_residues(kmax, ram, Variant::TrVariant)
}
