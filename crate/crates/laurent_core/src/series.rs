//! The truncated Laurent series type and its ring operations.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::SeriesError;

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;

/// Relative tolerance used to decide whether a differential is residue free.
pub const RESIDUE_FREE_REL_TOL: f64 = 1e-11;

/// Minimum of two truncation orders where `None` stands for "exact" (no unknown tail).
pub(crate) fn tmin(a: Option<i32>, b: Option<i32>) -> Option<i32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

/// A one-variable Laurent series with complex coefficients.
///
/// Coefficients are stored densely from `min_exp` upward. Exponents above
/// `trunc_order` are unknown; exponents below `min_exp` and stored gaps are
/// known to vanish. A series whose truncation order is `None` is exact: every
/// coefficient that is not stored is zero.
#[derive(Clone, PartialEq)]
pub struct LaurentSeries {
    min_exp: i32,
    coeffs: Vec<C64>,
    trunc: Option<i32>,
}

impl LaurentSeries {
    /// Builds a series from dense coefficients starting at `min_exp`.
    ///
    /// Coefficients beyond `trunc` are discarded. Leading and trailing exact
    /// zeros are stripped.
    pub fn new(min_exp: i32, coeffs: Vec<C64>, trunc: Option<i32>) -> Self {
        let mut s = LaurentSeries { min_exp, coeffs, trunc };
        if let Some(t) = trunc {
            let keep = (t - min_exp + 1).max(0) as usize;
            s.coeffs.truncate(keep);
        }
        s.normalize();
        s
    }

    /// An exact Laurent polynomial.
    pub fn exact(min_exp: i32, coeffs: Vec<C64>) -> Self {
        Self::new(min_exp, coeffs, None)
    }

    /// A series known up to and including exponent `trunc`.
    pub fn truncated(min_exp: i32, coeffs: Vec<C64>, trunc: i32) -> Self {
        Self::new(min_exp, coeffs, Some(trunc))
    }

    /// Real-coefficient convenience constructor for a truncated series.
    pub fn from_real(min_exp: i32, coeffs: &[f64], trunc: Option<i32>) -> Self {
        Self::new(min_exp, coeffs.iter().map(|&x| C64::new(x, 0.0)).collect(), trunc)
    }

    /// Builds the series whose coefficient at exponent `e` is `f(e)` for `lo <= e <= hi`.
    pub fn from_fn(lo: i32, hi: i32, trunc: Option<i32>, f: impl Fn(i32) -> C64) -> Self {
        let coeffs = (lo..=hi).map(f).collect();
        Self::new(lo, coeffs, trunc)
    }

    /// The exact monomial `c z^e`.
    pub fn monomial(e: i32, c: C64) -> Self {
        Self::exact(e, vec![c])
    }

    /// The exact zero series.
    pub fn zero() -> Self {
        Self::exact(0, Vec::new())
    }

    /// A series known to vanish up to exponent `trunc`.
    pub fn zero_until(trunc: i32) -> Self {
        Self::new(trunc + 1, Vec::new(), Some(trunc))
    }

    /// The exact constant series.
    pub fn constant(c: C64) -> Self {
        Self::monomial(0, c)
    }

    fn normalize(&mut self) {
        let zero = C64::new(0.0, 0.0);
        let lead = self.coeffs.iter().position(|c| *c != zero);
        match lead {
            None => {
                self.coeffs.clear();
                self.min_exp = match self.trunc {
                    Some(t) => t + 1,
                    None => 0,
                };
            }
            Some(p) => {
                if p > 0 {
                    self.coeffs.drain(..p);
                    self.min_exp += p as i32;
                }
                while self.coeffs.last() == Some(&zero) {
                    self.coeffs.pop();
                }
            }
        }
    }

    /// Lowest stored exponent.
    pub fn min_exp(&self) -> i32 {
        self.min_exp
    }

    /// Exponent of the first nonzero coefficient, if any is stored.
    pub fn valuation(&self) -> Option<i32> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.min_exp)
        }
    }

    /// Highest known exponent, or `None` for an exact series.
    pub fn trunc_order(&self) -> Option<i32> {
        self.trunc
    }

    /// True when the series has no unknown tail.
    pub fn is_exact(&self) -> bool {
        self.trunc.is_none()
    }

    /// True when the series is exactly zero (no unknown tail, no coefficients).
    pub fn is_exact_zero(&self) -> bool {
        self.trunc.is_none() && self.coeffs.is_empty()
    }

    /// Highest stored exponent (the last nonzero coefficient).
    pub fn max_stored_exp(&self) -> Option<i32> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.min_exp + self.coeffs.len() as i32 - 1)
        }
    }

    /// Lowest exponent that may carry a nonzero coefficient.
    ///
    /// For a truncated zero series this is one past the truncation order.
    /// Returns `None` only for the exact zero series.
    pub(crate) fn lower_bound(&self) -> Option<i32> {
        if self.coeffs.is_empty() {
            self.trunc.map(|t| t + 1)
        } else {
            Some(self.min_exp)
        }
    }

    /// True when the coefficient of `z^e` is determined by the stored data.
    pub fn is_known(&self, e: i32) -> bool {
        match self.trunc {
            Some(t) => e <= t,
            None => true,
        }
    }

    /// Coefficient of `z^e`; zero if not stored (callers check [`is_known`](Self::is_known)).
    pub fn coeff(&self, e: i32) -> C64 {
        let i = e - self.min_exp;
        if i < 0 || i as usize >= self.coeffs.len() {
            C64::new(0.0, 0.0)
        } else {
            self.coeffs[i as usize]
        }
    }

    /// Coefficient of `z^e`, failing if it lies beyond the truncation order.
    pub fn try_coeff(&self, e: i32) -> Result<C64, SeriesError> {
        match self.trunc {
            Some(t) if e > t => Err(SeriesError::TruncationInsufficient { needed: e, known: t }),
            _ => Ok(self.coeff(e)),
        }
    }

    /// Iterator over stored `(exponent, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (i32, C64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, c)| (self.min_exp + i as i32, *c))
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    /// Lowers the truncation order to `t` (never raises it).
    pub fn with_trunc(&self, t: i32) -> Self {
        let nt = tmin(self.trunc, Some(t));
        Self::new(self.min_exp, self.coeffs.clone(), nt)
    }

    /// Drops coefficients with exponent below `lo`.
    ///
    /// This is an approximation used for descending tails; the dropped
    /// coefficients are not tracked.
    pub fn drop_below(&self, lo: i32) -> Self {
        if lo <= self.min_exp {
            return self.clone();
        }
        let skip = (lo - self.min_exp) as usize;
        let coeffs = self.coeffs.iter().skip(skip).cloned().collect();
        Self::new(lo, coeffs, self.trunc)
    }

    /// Sets coefficients whose modulus is at most `tol` to zero.
    pub fn chop(&self, tol: f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| if c.norm() <= tol { C64::new(0.0, 0.0) } else { *c })
            .collect();
        Self::new(self.min_exp, coeffs, self.trunc)
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: C64) -> Self {
        Self::new(
            self.min_exp,
            self.coeffs.iter().map(|x| x * c).collect(),
            self.trunc,
        )
    }

    /// Multiplies the series by `z^k`.
    pub fn shift(&self, k: i32) -> Self {
        Self {
            min_exp: self.min_exp + k,
            coeffs: self.coeffs.clone(),
            trunc: self.trunc.map(|t| t + k),
        }
    }

    /// The series `f(-z)`.
    pub fn reflect(&self) -> Self {
        let coeffs = self
            .terms()
            .map(|(e, c)| if e.rem_euclid(2) == 1 { -c } else { c })
            .collect();
        Self::new(self.min_exp, coeffs, self.trunc)
    }

    /// Splits `f` into its odd and even parts.
    pub fn parity_split(&self) -> (Self, Self) {
        let zero = C64::new(0.0, 0.0);
        let odd = self
            .terms()
            .map(|(e, c)| if e.rem_euclid(2) == 1 { c } else { zero })
            .collect();
        let even = self
            .terms()
            .map(|(e, c)| if e.rem_euclid(2) == 0 { c } else { zero })
            .collect();
        (
            Self::new(self.min_exp, odd, self.trunc),
            Self::new(self.min_exp, even, self.trunc),
        )
    }

    /// Sum of two series.
    pub fn add_series(&self, other: &Self) -> Self {
        self.linear_combination(C64::new(1.0, 0.0), other, C64::new(1.0, 0.0))
    }

    /// `alpha * self + beta * other`.
    pub fn linear_combination(&self, alpha: C64, other: &Self, beta: C64) -> Self {
        let trunc = tmin(self.trunc, other.trunc);
        let lo = match (self.coeffs.is_empty(), other.coeffs.is_empty()) {
            (true, true) => return Self::new(0, Vec::new(), trunc),
            (true, false) => other.min_exp,
            (false, true) => self.min_exp,
            (false, false) => self.min_exp.min(other.min_exp),
        };
        let hi_a = self.max_stored_exp().unwrap_or(lo);
        let hi_b = other.max_stored_exp().unwrap_or(lo);
        let mut hi = hi_a.max(hi_b);
        if let Some(t) = trunc {
            hi = hi.min(t);
        }
        if hi < lo {
            return Self::new(lo, Vec::new(), trunc);
        }
        let coeffs = (lo..=hi)
            .map(|e| alpha * self.coeff(e) + beta * other.coeff(e))
            .collect();
        Self::new(lo, coeffs, trunc)
    }

    /// Product of two series.
    pub fn mul_series(&self, other: &Self) -> Self {
        self.mul_to(other, None)
    }

    /// Product of two series, additionally truncated at `cap` when given.
    pub fn mul_to(&self, other: &Self, cap: Option<i32>) -> Self {
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::new(0, Vec::new(), cap);
        }
        let la = self.lower_bound().unwrap();
        let lb = other.lower_bound().unwrap();
        let t_from_a = self.trunc.map(|t| t + lb);
        let t_from_b = other.trunc.map(|t| t + la);
        let trunc = tmin(tmin(t_from_a, t_from_b), cap);
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::new(la + lb, Vec::new(), trunc);
        }
        let lo = self.min_exp + other.min_exp;
        let mut hi = self.max_stored_exp().unwrap() + other.max_stored_exp().unwrap();
        if let Some(t) = trunc {
            hi = hi.min(t);
        }
        if hi < lo {
            return Self::new(lo, Vec::new(), trunc);
        }
        let n = (hi - lo + 1) as usize;
        let mut out = vec![C64::new(0.0, 0.0); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= n {
                break;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= n {
                    break;
                }
                out[i + j] += a * b;
            }
        }
        Self::new(lo, out, trunc)
    }

    /// Reciprocal computed up to exponent `cap` (also limited by the natural precision).
    pub fn recip_to(&self, cap: Option<i32>) -> Result<Self, SeriesError> {
        let m = self.valuation().ok_or(SeriesError::DivisionByZeroSeries)?;
        let natural = self.trunc.map(|t| t - 2 * m);
        let is_monomial = self.coeffs.len() == 1;
        let trunc = if is_monomial && self.trunc.is_none() {
            cap
        } else {
            tmin(natural, cap)
        };
        let b0 = self.coeffs[0];
        if is_monomial {
            return Ok(Self::new(-m, vec![b0.inv()], trunc));
        }
        let t = trunc.ok_or(SeriesError::TruncationRequired)?;
        let lo = -m;
        if t < lo {
            return Ok(Self::new(lo, Vec::new(), Some(t)));
        }
        let n = (t - lo + 1) as usize;
        let inv0 = b0.inv();
        let mut q = vec![C64::new(0.0, 0.0); n];
        q[0] = inv0;
        for k in 1..n {
            let mut acc = C64::new(0.0, 0.0);
            let upto = k.min(self.coeffs.len() - 1);
            for j in 1..=upto {
                acc += self.coeffs[j] * q[k - j];
            }
            q[k] = -acc * inv0;
        }
        Ok(Self::new(lo, q, Some(t)))
    }

    /// Reciprocal at the natural precision.
    pub fn recip(&self) -> Result<Self, SeriesError> {
        self.recip_to(None)
    }

    /// Quotient `self / other`.
    ///
    /// The truncation order of the result is the tightest one implied by the
    /// inputs. Dividing two exact series is only allowed when the divisor is a
    /// monomial; otherwise the caller must truncate one input first.
    pub fn div_series(&self, other: &Self) -> Result<Self, SeriesError> {
        let mb = other.valuation().ok_or(SeriesError::DivisionByZeroSeries)?;
        if self.is_exact_zero() {
            return Ok(Self::zero());
        }
        let la = self.lower_bound().unwrap();
        let t_from_a = self.trunc.map(|t| t - mb);
        let t_from_b = other.trunc.map(|t| t - 2 * mb + la);
        let trunc = tmin(t_from_a, t_from_b);
        let inv = other.recip_to(trunc.map(|t| t - la))?;
        Ok(self.mul_to(&inv, trunc))
    }

    /// Formal derivative `d/dz`.
    pub fn derivative(&self) -> Self {
        let coeffs = self.terms().map(|(e, c)| c * e as f64).collect();
        Self::new(self.min_exp - 1, coeffs, self.trunc.map(|t| t - 1))
    }

    /// Evaluates the (truncated) series at a point.
    pub fn eval(&self, z: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        if self.coeffs.is_empty() {
            return acc;
        }
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc * z.powi(self.min_exp)
    }

    /// Maximum coefficient difference with another series over their common known window.
    pub fn max_diff(&self, other: &Self) -> f64 {
        let d = self.linear_combination(C64::new(1.0, 0.0), other, C64::new(-1.0, 0.0));
        d.max_abs()
    }
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentSeries[")?;
        for (k, (e, c)) in self.terms().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({:.6e}{:+.6e}i)z^{}", c.re, c.im, e)?;
        }
        match self.trunc {
            Some(t) => write!(f, " + O(z^{})]", t + 1),
            None => write!(f, "]"),
        }
    }
}

impl Add for &LaurentSeries {
    type Output = LaurentSeries;
    fn add(self, rhs: &LaurentSeries) -> LaurentSeries {
        self.add_series(rhs)
    }
}

impl Sub for &LaurentSeries {
    type Output = LaurentSeries;
    fn sub(self, rhs: &LaurentSeries) -> LaurentSeries {
        self.linear_combination(C64::new(1.0, 0.0), rhs, C64::new(-1.0, 0.0))
    }
}

impl Mul for &LaurentSeries {
    type Output = LaurentSeries;
    fn mul(self, rhs: &LaurentSeries) -> LaurentSeries {
        self.mul_series(rhs)
    }
}

impl Neg for &LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        self.scale(C64::new(-1.0, 0.0))
    }
}

/// Selector for [`ring_ops`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingOp {
    Add,
    Mul,
    Div,
}

/// Binary ring operation on two series.
pub fn ring_ops(a: &LaurentSeries, b: &LaurentSeries, op: RingOp) -> Result<LaurentSeries, SeriesError> {
    match op {
        RingOp::Add => Ok(a + b),
        RingOp::Mul => Ok(a * b),
        RingOp::Div => a.div_series(b),
    }
}
