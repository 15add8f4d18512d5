//! Direct residue evaluation of the Hamiltonians and the tensor assembly cross-check.

use std::collections::BTreeMap;

use laurent_core::{LaurentSeries, C64};

use crate::error::AiryError;
use crate::index::ModeIndex;
use crate::tensors::{AiryTensors, Variant};
use crate::welement::WElement;

/// Evaluates `H_{(i, α)}(w)` for `1 ≤ i ≤ kmax` as residues.
///
/// With `w_α = W dz` and `ψ = W / (2z)`:
/// `H_{2n} = Res((z - ψ) z^{2n} d(z^2))` and
/// `H_{2n-1} = ½ Res((z - ψ)(z - ψ') z^{2n-2} d(z^2))`, where `ψ' = ψ` for
/// the residue constraints and `ψ'(z) = W(-z) / (2z)` for the variant.
pub fn eval_hamiltonians(w: &WElement, variant: Variant, kmax: u32) -> Result<BTreeMap<ModeIndex, C64>, AiryError> {
    let mut out = BTreeMap::new();
    let one = C64::new(1.0, 0.0);
    let z = LaurentSeries::monomial(1, one);
    for alpha in 0..w.ram().len() {
        let big_w = &w.part(alpha).base;
        let psi = big_w.shift(-1).scale(C64::new(0.5, 0.0));
        let first = &z - &psi;
        let second = match variant {
            Variant::ResidueConstraints => first.clone(),
            Variant::TrVariant => &z - &big_w.reflect().shift(-1).scale(C64::new(0.5, 0.0)),
        };
        let quadratic = &first * &second;
        for i in 1..=kmax {
            let n = (i as i32 + 1) / 2;
            // d(z^2) = 2z dz
            let integrand = if i % 2 == 0 {
                &first * &LaurentSeries::monomial(2 * n + 1, C64::new(2.0, 0.0))
            } else {
                &quadratic * &LaurentSeries::monomial(2 * n - 1, one)
            };
            out.insert(ModeIndex::new(i, alpha), integrand.try_coeff(-1)?);
        }
    }
    Ok(out)
}

/// Evaluates `H_i = -y_i + a_ijk x^j x^k + 2 b_ij^k x^j y_k + c_i^jk y_j y_k`
/// from tensors, using the coordinates of `w` up to the tensors' index bound.
pub fn eval_hamiltonians_from_tensors(w: &WElement, t: &AiryTensors) -> Result<BTreeMap<ModeIndex, C64>, AiryError> {
    if w.ram() != t.ram() {
        return Err(AiryError::ShapeMismatch("element and tensors use different labels".into()));
    }
    let r = t.ram().len();
    let d = t.dim();
    let mut x = vec![C64::new(0.0, 0.0); d];
    let mut y = vec![C64::new(0.0, 0.0); d];
    for f in 0..d {
        let m = ModeIndex::from_flat(f, r);
        x[f] = w.x(m)?;
        y[f] = w.y(m)?;
    }
    let dense = t.dense();
    let mut out = BTreeMap::new();
    for i in 0..d {
        let mut h = -y[i];
        for j in 0..d {
            for k in 0..d {
                let o = dense.at(i, j, k);
                h += dense.a[o] * x[j] * x[k] + dense.b[o] * x[j] * y[k] * 2.0 + dense.c[o] * y[j] * y[k];
            }
        }
        out.insert(ModeIndex::from_flat(i, r), h);
    }
    Ok(out)
}

/// Largest modulus over a map of Hamiltonian values.
pub fn max_abs_value(h: &BTreeMap<ModeIndex, C64>) -> f64 {
    h.values().map(|v| v.norm()).fold(0.0, f64::max)
}
