//! Elements `w = Σ (x^k f_k + y_k e^k)` with one residue-free series per label.

use laurent_core::{LaurentSeries, SeriesDifferential, C64};

use crate::error::AiryError;
use crate::index::{ModeIndex, RamLabels};

/// A labeled family of residue-free differentials `w_α = W_α(z) dz`.
///
/// Coordinates: `y_k` is the coefficient of `z^{-k-1} dz` and `k x^k` the
/// coefficient of `z^{k-1} dz`, so that `J_{+k} = y_k` and `J_{-k} = k x^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct WElement {
    ram: RamLabels,
    parts: Vec<SeriesDifferential>,
}

impl WElement {
    /// Wraps one differential per label; each must be residue-free.
    pub fn new(ram: RamLabels, parts: Vec<SeriesDifferential>) -> Result<Self, AiryError> {
        if parts.len() != ram.len() {
            return Err(AiryError::ShapeMismatch(format!("{} series for {} labels", parts.len(), ram.len())));
        }
        for (alpha, p) in parts.iter().enumerate() {
            if !p.is_residue_free() {
                return Err(AiryError::NotResidueFree { alpha });
            }
        }
        Ok(WElement { ram, parts })
    }

    /// The zero element.
    pub fn zero(ram: RamLabels) -> Self {
        let parts = vec![SeriesDifferential::new(LaurentSeries::zero()); ram.len()];
        WElement { ram, parts }
    }

    /// Exact element with the given nonzero coordinates.
    pub fn from_coordinates(ram: RamLabels, x: &[(ModeIndex, C64)], y: &[(ModeIndex, C64)]) -> Self {
        let mut parts = vec![LaurentSeries::zero(); ram.len()];
        for &(m, v) in x {
            let term = LaurentSeries::monomial(m.k as i32 - 1, v * m.k as f64);
            parts[m.alpha] = &parts[m.alpha] + &term;
        }
        for &(m, v) in y {
            let term = LaurentSeries::monomial(-(m.k as i32) - 1, v);
            parts[m.alpha] = &parts[m.alpha] + &term;
        }
        WElement { ram, parts: parts.into_iter().map(SeriesDifferential::new).collect() }
    }

    /// Label set.
    pub fn ram(&self) -> &RamLabels {
        &self.ram
    }

    /// The differential at label `alpha`.
    pub fn part(&self, alpha: usize) -> &SeriesDifferential {
        &self.parts[alpha]
    }

    /// `J_k` at label `alpha` for any nonzero integer `k`: the coefficient of `z^{-k-1} dz`.
    pub fn j(&self, alpha: usize, k: i32) -> Result<C64, AiryError> {
        assert!(k != 0, "J_0 is not a coordinate");
        Ok(self.parts[alpha].base.try_coeff(-k - 1)?)
    }

    /// `x^k` at `m`.
    pub fn x(&self, m: ModeIndex) -> Result<C64, AiryError> {
        Ok(self.j(m.alpha, -(m.k as i32))? / m.k as f64)
    }

    /// `y_k` at `m`.
    pub fn y(&self, m: ModeIndex) -> Result<C64, AiryError> {
        self.j(m.alpha, m.k as i32)
    }
}
