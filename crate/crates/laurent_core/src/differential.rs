//! Differentials `f(z) dz`, residues, primitives, the symplectic pairing and
//! the square-root shift flow.

use crate::error::SeriesError;
use crate::series::{LaurentSeries, C64, RESIDUE_FREE_REL_TOL};

/// A differential `f(z) dz` stored through its coefficient function `f`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesDifferential {
    /// Coefficient function `f` in `f(z) dz`.
    pub base: LaurentSeries,
}

/// Mode selector for [`integrate_residue`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegrateMode {
    Residue,
    Primitive,
}

/// Result of [`integrate_residue`].
#[derive(Debug, Clone, PartialEq)]
pub enum IntegrateOutput {
    Residue(C64),
    Primitive(LaurentSeries),
}

impl SeriesDifferential {
    /// Wraps a coefficient function.
    pub fn new(base: LaurentSeries) -> Self {
        SeriesDifferential { base }
    }

    /// The basis differential `e^k = z^{-k} dz/z`.
    pub fn e_basis(k: i32) -> Self {
        Self::new(LaurentSeries::monomial(-k - 1, C64::new(1.0, 0.0)))
    }

    /// The basis differential `f_k = k z^k dz/z`.
    pub fn f_basis(k: i32) -> Self {
        Self::new(LaurentSeries::monomial(k - 1, C64::new(k as f64, 0.0)))
    }

    /// Residue: the coefficient of `z^{-1}` in `f`.
    pub fn residue(&self) -> Result<C64, SeriesError> {
        self.base.try_coeff(-1)
    }

    /// True when the residue is below the relative tolerance `rel_tol`.
    pub fn is_residue_free_with(&self, rel_tol: f64) -> bool {
        let scale = self.base.max_abs().max(f64::MIN_POSITIVE);
        match self.residue() {
            Ok(r) => r.norm() <= rel_tol * scale,
            Err(_) => false,
        }
    }

    /// True when the residue is below the default tolerance.
    pub fn is_residue_free(&self) -> bool {
        self.is_residue_free_with(RESIDUE_FREE_REL_TOL)
    }

    fn check_residue_free(&self, rel_tol: f64) -> Result<(), SeriesError> {
        let r = self.residue()?;
        let scale = self.base.max_abs().max(f64::MIN_POSITIVE);
        if r.norm() > rel_tol * scale {
            Err(SeriesError::NonzeroResidue { re: r.re, im: r.im })
        } else {
            Ok(())
        }
    }

    /// Term-by-term antiderivative with zero constant term.
    ///
    /// Fails with [`SeriesError::NonzeroResidue`] when the residue exceeds the
    /// default relative tolerance. A residue below tolerance is dropped.
    pub fn primitive(&self) -> Result<LaurentSeries, SeriesError> {
        self.primitive_with(RESIDUE_FREE_REL_TOL)
    }

    /// [`primitive`](Self::primitive) with an explicit residue tolerance.
    pub fn primitive_with(&self, rel_tol: f64) -> Result<LaurentSeries, SeriesError> {
        self.check_residue_free(rel_tol)?;
        let b = &self.base;
        let coeffs = b
            .terms()
            .map(|(e, c)| if e == -1 { C64::new(0.0, 0.0) } else { c / (e + 1) as f64 })
            .collect();
        Ok(LaurentSeries::new(b.min_exp() + 1, coeffs, b.trunc_order().map(|t| t + 1)))
    }

    /// Pullback under the involution `z -> -z`: `f(z) dz -> -f(-z) dz`.
    pub fn pullback_neg(&self) -> Self {
        Self::new(self.base.reflect().scale(C64::new(-1.0, 0.0)))
    }

    /// Sum of two differentials.
    pub fn add(&self, other: &Self) -> Self {
        Self::new(&self.base + &other.base)
    }

    /// Scalar multiple.
    pub fn scale(&self, c: C64) -> Self {
        Self::new(self.base.scale(c))
    }
}

/// Residue or primitive of a differential.
pub fn integrate_residue(f: &SeriesDifferential, mode: IntegrateMode) -> Result<IntegrateOutput, SeriesError> {
    match mode {
        IntegrateMode::Residue => f.residue().map(IntegrateOutput::Residue),
        IntegrateMode::Primitive => f.primitive().map(IntegrateOutput::Primitive),
    }
}

/// The pairing `Res_{z=0}(f ∫ g)` on residue-free differentials.
pub fn symplectic_pairing(f: &SeriesDifferential, g: &SeriesDifferential) -> Result<C64, SeriesError> {
    f.check_residue_free(RESIDUE_FREE_REL_TOL)?;
    let gi = g.primitive()?;
    let prod = &f.base * &gi;
    prod.try_coeff(-1)
}

/// Generalized binomial coefficients `binom(r, j)` for `j = 0..n`.
fn binomials(r: f64, n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    let mut b = 1.0;
    for j in 0..n {
        out.push(b);
        b *= (r - j as f64) / (j + 1) as f64;
    }
    out
}

/// The substitution `z -> sqrt(z^2 + a)` applied to a differential.
///
/// Each term `c z^m dz` becomes `c z^m (1 + a/z^2)^{(m-1)/2} dz`, the large-`z`
/// expansion of `c φ^m dφ` with `φ = sqrt(z^2 + a)`. The descending tail is
/// infinite; coefficients with exponent below `low_cut` are dropped. The
/// truncation order of the input is kept.
pub fn sqrt_shift_flow(f: &SeriesDifferential, a: C64, low_cut: i32) -> SeriesDifferential {
    let b = &f.base;
    let hi = match b.max_stored_exp() {
        Some(h) => h,
        None => return f.clone(),
    };
    let lo = low_cut.min(b.min_exp());
    let mut out = vec![C64::new(0.0, 0.0); (hi - lo + 1) as usize];
    for (m, c) in b.terms() {
        if c.norm() == 0.0 || m < low_cut {
            if m >= lo {
                out[(m - lo) as usize] += c;
            }
            continue;
        }
        let steps = ((m - low_cut) / 2) as usize + 1;
        let bin = binomials((m - 1) as f64 / 2.0, steps);
        let mut apow = C64::new(1.0, 0.0);
        for (j, bj) in bin.iter().enumerate() {
            let e = m - 2 * j as i32;
            out[(e - lo) as usize] += c * apow * *bj;
            apow *= a;
        }
    }
    let series = LaurentSeries::new(lo, out, b.trunc_order()).drop_below(low_cut);
    SeriesDifferential::new(series)
}
