//! Local spectral curves: odd part of `ω_{0,1}` and the regular part of `ω_{0,2}`.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use airy_engine::{ModeIndex, RamLabels};
use laurent_core::{LaurentSeries, C64};

use crate::error::SpectralError;

/// Relative tolerance for the symmetry of the regular part.
pub const CURVE_SYMMETRY_TOL: f64 = 1e-12;

/// A collection of ramification points in local coordinates with involution `z -> -z`.
///
/// At label `α`, `ω_{0,1}(z) - ω_{0,1}(-z) = D_α(z) dz`. The Bergman kernel is
/// `B(z_1, z_2) = δ_{αβ} dz_1 dz_2 / (z_1 - z_2)^2 + Σ P z_1^{i-1} z_2^{j-1} dz_1 dz_2`
/// with `P^{(i,α)(j,β)} = i j s^{(i,α)(j,β)}`; `s` is indexed by flat mode indices.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalSpectralCurve {
    ram: RamLabels,
    kmax: u32,
    denom: Vec<LaurentSeries>,
    s: DMatrix<C64>,
    annulus: (f64, f64),
}

impl LocalSpectralCurve {
    /// Airy points: `D = 4z^2` and vanishing regular part.
    pub fn airy(ram: RamLabels, kmax: u32) -> Self {
        let n = ram.len() * kmax as usize;
        Self::with_s(ram, kmax, DMatrix::from_element(n, n, C64::new(0.0, 0.0))).expect("zero regular part is valid")
    }

    /// `D = 4z^2` at every label with the given regular part.
    pub fn with_s(ram: RamLabels, kmax: u32, s: DMatrix<C64>) -> Result<Self, SpectralError> {
        let denom = vec![LaurentSeries::monomial(2, C64::new(4.0, 0.0)); ram.len()];
        Self::new(ram, kmax, denom, s)
    }

    /// General constructor; validates every invariant.
    pub fn new(ram: RamLabels, kmax: u32, denom: Vec<LaurentSeries>, s: DMatrix<C64>) -> Result<Self, SpectralError> {
        let n = ram.len() * kmax as usize;
        if denom.len() != ram.len() {
            return Err(SpectralError::InvalidCurve(format!("{} denominators for {} labels", denom.len(), ram.len())));
        }
        if s.shape() != (n, n) {
            return Err(SpectralError::InvalidCurve(format!("regular part has shape {:?}, expected ({n}, {n})", s.shape())));
        }
        for (alpha, d) in denom.iter().enumerate() {
            if !d.is_exact() {
                return Err(SpectralError::InvalidCurve(format!("denominator at label {alpha} must be a polynomial")));
            }
            let bad = d.terms().any(|(e, c)| c.norm() > 0.0 && (e < 2 || e % 2 != 0));
            if bad || d.coeff(2).norm() == 0.0 {
                return Err(SpectralError::InvalidCurve(format!(
                    "denominator at label {alpha} must be even with a nonzero z^2 coefficient and no lower terms"
                )));
            }
        }
        let scale = s.iter().map(|x| x.norm()).fold(1.0, f64::max);
        let asym = (&s - s.transpose()).iter().map(|x| x.norm()).fold(0.0, f64::max);
        if asym > CURVE_SYMMETRY_TOL * scale {
            return Err(SpectralError::InvalidCurve(format!("regular part is not symmetric (defect {asym:e})")));
        }
        Ok(LocalSpectralCurve { ram, kmax, denom, s, annulus: (0.05, 1.0) })
    }

    /// Replaces the evaluation annulus `r_min ≤ |z| ≤ r_max`.
    pub fn with_annulus(mut self, r_min: f64, r_max: f64) -> Self {
        assert!(0.0 < r_min && r_min < r_max, "annulus radii must satisfy 0 < r_min < r_max");
        self.annulus = (r_min, r_max);
        self
    }

    pub fn ram(&self) -> &RamLabels {
        &self.ram
    }

    /// Largest mode number carried by the regular part.
    pub fn kmax(&self) -> u32 {
        self.kmax
    }

    /// Number of flat indices.
    pub fn dim(&self) -> usize {
        self.ram.len() * self.kmax as usize
    }

    /// `D_α` in `ω_{0,1}(z) - ω_{0,1}(-z) = D_α(z) dz`.
    pub fn denom(&self, alpha: usize) -> &LaurentSeries {
        &self.denom[alpha]
    }

    /// Regular-part coefficients `s`.
    pub fn s(&self) -> &DMatrix<C64> {
        &self.s
    }

    pub fn annulus(&self) -> (f64, f64) {
        self.annulus
    }

    /// `s^{(i,α)(j,β)}` by mode indices; zero beyond the bound.
    pub fn s_at(&self, a: ModeIndex, b: ModeIndex) -> C64 {
        if a.k > self.kmax || b.k > self.kmax {
            return C64::new(0.0, 0.0);
        }
        let r = self.ram.len();
        self.s[(a.flat(r), b.flat(r))]
    }

    /// The curve with every mixed-label entry of `s` set to zero.
    pub fn decoupled(&self) -> Self {
        let r = self.ram.len();
        let s = DMatrix::from_fn(self.dim(), self.dim(), |i, j| {
            if ModeIndex::from_flat(i, r).alpha == ModeIndex::from_flat(j, r).alpha { self.s[(i, j)] } else { C64::new(0.0, 0.0) }
        });
        LocalSpectralCurve { s, ..self.clone() }
    }

    /// Coefficient function of `ē^{k,β}` at label `alpha`:
    /// `δ_{αβ} z^{-k-1} + Σ_i i s^{(i,α)(k,β)} z^{i-1}`.
    pub fn ebar(&self, m: ModeIndex, alpha: usize) -> LaurentSeries {
        let lo = -(m.k as i32) - 1;
        let hi = self.kmax as i32 - 1;
        let r = self.ram.len();
        let col = m.flat(r);
        LaurentSeries::from_fn(lo, hi, None, |e| {
            let mut v = C64::new(0.0, 0.0);
            if e == lo && m.alpha == alpha {
                v += C64::new(1.0, 0.0);
            }
            if e >= 0 && m.k <= self.kmax {
                let i = (e + 1) as u32;
                v += self.s[(ModeIndex::new(i, alpha).flat(r), col)] * i as f64;
            }
            v
        })
    }

    /// Coefficient function of `f_{k,β} = k z^{k-1} dz` at label `alpha` (zero off its label).
    pub fn f_basis(&self, m: ModeIndex, alpha: usize) -> LaurentSeries {
        if m.alpha == alpha {
            LaurentSeries::monomial(m.k as i32 - 1, C64::new(m.k as f64, 0.0))
        } else {
            LaurentSeries::zero()
        }
    }

    /// Coefficient function of `B(z, σ z)` at label `alpha` in `dz^2`, including
    /// the sign from `d(-z) = -dz`.
    pub fn bergman_on_involution(&self, alpha: usize) -> LaurentSeries {
        let r = self.ram.len();
        let k = self.kmax as i32;
        LaurentSeries::from_fn(-2, 2 * k - 2, None, |e| {
            if e == -2 {
                return C64::new(-0.25, 0.0);
            }
            let mut v = C64::new(0.0, 0.0);
            // Σ_{i+j-2 = e} P_ij z^{i-1} (-z)^{j-1}
            for i in 1..=k {
                let j = e + 2 - i;
                if j < 1 || j > k {
                    continue;
                }
                let p = self.s[(ModeIndex::new(i as u32, alpha).flat(r), ModeIndex::new(j as u32, alpha).flat(r))] * (i * j) as f64;
                let sign = if (j - 1) % 2 == 0 { 1.0 } else { -1.0 };
                v -= p * sign;
            }
            v
        })
    }

    /// Evaluates the coefficient function of `B(z_1, z_2)` at labels `(α, β)`.
    pub fn bergman_eval(&self, alpha: usize, z1: C64, beta: usize, z2: C64) -> C64 {
        let r = self.ram.len();
        let mut v = if alpha == beta { (z1 - z2).powi(-2) } else { C64::new(0.0, 0.0) };
        for i in 1..=self.kmax {
            let zi = z1.powu(i - 1);
            for j in 1..=self.kmax {
                let s = self.s[(ModeIndex::new(i, alpha).flat(r), ModeIndex::new(j, beta).flat(r))];
                if s.norm() > 0.0 {
                    v += s * (i * j) as f64 * zi * z2.powu(j - 1);
                }
            }
        }
        v
    }
}

/// A symmetric matrix over flat indices whose entries with mode numbers `(i, j)`
/// are uniform in `[-scale, scale] / (i j)` in real and imaginary part, seeded.
/// With `mixed = false` the entries coupling different labels vanish.
pub fn seeded_symmetric_s(ram: &RamLabels, kmax: u32, scale: f64, mixed: bool, seed: u64) -> DMatrix<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = ram.len() * kmax as usize;
    let r = ram.len();
    let mut s = DMatrix::from_element(n, n, C64::new(0.0, 0.0));
    for i in 0..n {
        for j in i..n {
            let (a, b) = (ModeIndex::from_flat(i, r), ModeIndex::from_flat(j, r));
            let v = C64::new(rng.random_range(-scale..=scale), rng.random_range(-scale..=scale)) / (a.k * b.k) as f64;
            if mixed || a.alpha == b.alpha {
                s[(i, j)] = v;
                s[(j, i)] = v;
            }
        }
    }
    s
}
