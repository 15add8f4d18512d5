//! Composition, functional inversion and fractional powers.

use std::f64::consts::PI;

use crate::error::SeriesError;
use crate::series::{tmin, LaurentSeries, C64};

/// Mode selector for [`compose_invert`].
#[derive(Debug, Clone)]
pub enum ComposeMode<'a> {
    /// Substitute the inner series: `f(g(z))`.
    Compose(&'a LaurentSeries),
    /// Functional inverse `h` with `f(h(z)) = z`.
    FunctionalInverse,
}

/// Dispatches to [`compose`] or [`functional_inverse`].
pub fn compose_invert(f: &LaurentSeries, mode: ComposeMode<'_>) -> Result<LaurentSeries, SeriesError> {
    match mode {
        ComposeMode::Compose(g) => compose(f, g),
        ComposeMode::FunctionalInverse => functional_inverse(f),
    }
}

/// Natural truncation order of `f(g)`.
fn compose_trunc(f: &LaurentSeries, g: &LaurentSeries, mg: i32) -> Option<i32> {
    let rel_g = g.trunc_order().map(|t| t - mg);
    let mut t = f.trunc_order().map(|tf| (tf + 1) * mg - 1);
    for (n, _) in f.terms() {
        if n != 0 {
            t = tmin(t, rel_g.map(|r| n * mg + r));
        }
    }
    t
}

/// Substitutes `g` into `f`, returning `f(g(z))` at the natural truncation order.
///
/// The inner series must have positive valuation. Negative powers of `f` are
/// handled through the reciprocal of `g`.
pub fn compose(f: &LaurentSeries, g: &LaurentSeries) -> Result<LaurentSeries, SeriesError> {
    compose_to(f, g, None)
}

/// Like [`compose`] but additionally truncated at `cap`.
pub fn compose_to(f: &LaurentSeries, g: &LaurentSeries, cap: Option<i32>) -> Result<LaurentSeries, SeriesError> {
    let mg = match g.valuation() {
        Some(m) if m >= 1 => m,
        _ => return Err(SeriesError::InvalidComposition),
    };
    if f.is_exact_zero() {
        return Ok(LaurentSeries::zero());
    }
    let natural = compose_trunc(f, g, mg);
    let trunc = tmin(natural, cap);
    let has_negative = f.terms().any(|(n, _)| n < 0);
    let is_monomial = g.terms().count() == 1;
    if trunc.is_none() && has_negative && !is_monomial {
        return Err(SeriesError::TruncationRequired);
    }
    let zero = C64::new(0.0, 0.0);
    let lo = f.min_exp().min(0);
    let hi = f.max_stored_exp().unwrap_or(0).max(0);
    // Positive part by Horner in g.
    let mut acc = LaurentSeries::new(0, Vec::new(), trunc);
    if hi > 0 {
        acc = LaurentSeries::constant(f.coeff(hi)).with_trunc_opt(trunc);
        for n in (1..hi).rev() {
            acc = acc.mul_to(g, trunc).add_series(&LaurentSeries::constant(f.coeff(n)));
        }
        acc = acc.mul_to(g, trunc);
    }
    let c0 = f.coeff(0);
    if c0 != zero {
        acc = acc.add_series(&LaurentSeries::constant(c0));
    }
    if lo < 0 {
        // Horner in 1/g over exponents lo..-1 of f.
        let ginv = g.recip_to(trunc.map(|t| t + (-lo - 1) * mg))?;
        let mut neg = LaurentSeries::constant(f.coeff(lo));
        for n in lo + 1..0 {
            neg = neg.mul_to(&ginv, None).add_series(&LaurentSeries::constant(f.coeff(n)));
        }
        neg = neg.mul_to(&ginv, trunc);
        acc = acc.add_series(&neg);
    }
    Ok(acc.with_trunc_opt(trunc))
}

impl LaurentSeries {
    /// Declares the coefficients up to `t` known (missing ones are zero).
    pub(crate) fn claim_known_until(&self, t: i32) -> LaurentSeries {
        LaurentSeries::new(self.min_exp(), self.terms().map(|(_, c)| c).collect(), Some(t))
    }

    /// Applies [`with_trunc`](LaurentSeries::with_trunc) when `t` is given.
    pub fn with_trunc_opt(&self, t: Option<i32>) -> LaurentSeries {
        match t {
            Some(t) => self.with_trunc(t),
            None => self.clone(),
        }
    }
}

/// Functional inverse of `f = c1 z + O(z^2)` by Newton iteration with precision doubling.
///
/// The result is known to the same exponent as `f`. An exact linear input is
/// inverted exactly; any other exact input must be truncated first.
pub fn functional_inverse(f: &LaurentSeries) -> Result<LaurentSeries, SeriesError> {
    if f.terms().any(|(e, c)| e < 1 && c.norm() > 0.0) {
        return Err(SeriesError::NotInvertible("series has terms of non-positive degree".into()));
    }
    let c1 = f.coeff(1);
    if c1.norm() == 0.0 {
        return Err(SeriesError::NotInvertible("vanishing linear coefficient".into()));
    }
    let z = LaurentSeries::monomial(1, C64::new(1.0, 0.0));
    let target = match f.trunc_order() {
        Some(t) => t,
        None => {
            if f.terms().count() == 1 {
                return Ok(LaurentSeries::monomial(1, c1.inv()));
            }
            return Err(SeriesError::TruncationRequired);
        }
    };
    if target < 1 {
        return Err(SeriesError::NotInvertible("linear coefficient is not known".into()));
    }
    let fp = f.derivative();
    let mut h = LaurentSeries::truncated(1, vec![c1.inv()], 1);
    let mut prec = 1;
    while prec < target {
        prec = (2 * prec).min(target);
        let hp = h.claim_known_until(prec);
        let fh = compose_to(f, &hp, Some(prec))?;
        let fph = compose_to(&fp, &hp, Some(prec - 1))?;
        let resid = &fh - &z;
        let step = resid.div_series(&fph)?;
        h = (&hp - &step).with_trunc(prec);
    }
    Ok(h.with_trunc(target))
}

/// The `q`-th root of `c^p` with index `branch`.
pub fn branch_root(c: C64, p: i32, q: i32, branch: i32) -> C64 {
    let cp = c.powi(p);
    let arg = cp.arg() + 2.0 * PI * branch as f64;
    C64::from_polar(cp.norm().powf(1.0 / q as f64), arg / q as f64)
}

/// Fractional power `f^(p/q)` on the branch selected by `branch`.
///
/// With `f = c z^m (1 + u)`, the result is `r z^(m p / q) (1 + u)^(p/q)` where
/// `r` is root number `branch` of `c^p` (root 0 uses the principal argument of
/// `c^p`). The binomial factor is computed with the J.C.P. Miller recurrence.
pub fn pow_frac(f: &LaurentSeries, p: i32, q: i32, branch: i32) -> Result<LaurentSeries, SeriesError> {
    assert!(q >= 1, "root index must be positive");
    let m = f.valuation().ok_or(SeriesError::DivisionByZeroSeries)?;
    if (m * p).rem_euclid(q) != 0 {
        return Err(SeriesError::BranchUndefined { m, p, q });
    }
    let c = f.coeff(m);
    let lead = branch_root(c, p, q, branch);
    let new_m = m * p / q;
    let r = p as f64 / q as f64;
    let h: Vec<C64> = f.terms().map(|(_, x)| x / c).collect();
    let rel = match f.trunc_order() {
        Some(t) => t - m,
        None => {
            if h.len() == 1 {
                return Ok(LaurentSeries::monomial(new_m, lead));
            }
            return Err(SeriesError::TruncationRequired);
        }
    };
    if rel < 0 {
        return Ok(LaurentSeries::zero_until(new_m - 1));
    }
    let n = rel as usize + 1;
    let mut g = vec![C64::new(0.0, 0.0); n];
    g[0] = C64::new(1.0, 0.0);
    for k in 1..n {
        let mut acc = C64::new(0.0, 0.0);
        for j in 1..=k.min(h.len() - 1) {
            acc += h[j] * g[k - j] * (r * j as f64 - (k - j) as f64);
        }
        g[k] = acc / k as f64;
    }
    let coeffs = g.into_iter().map(|x| x * lead).collect();
    Ok(LaurentSeries::truncated(new_m, coeffs, new_m + rel))
}
