//! Truncated Laurent series over complex coefficients.
//!
//! The central type is [`LaurentSeries`], a one-variable series stored on a
//! closed exponent window. Coefficients above the truncation order are
//! unknown rather than zero, and every operation reports the tightest window
//! on which its output is determined by its inputs. On top of the ring
//! operations the crate provides composition, functional inversion,
//! fractional powers, residues and primitives of differentials `f(z) dz`,
//! the pairing `Res(f ∫ g)`, and the substitution `z -> sqrt(z^2 + a)`.

mod differential;
mod error;
mod ops;
mod series;

pub use differential::{
    integrate_residue, sqrt_shift_flow, symplectic_pairing, IntegrateMode, IntegrateOutput, SeriesDifferential,
};
pub use error::SeriesError;
pub use ops::{branch_root, compose, compose_invert, compose_to, functional_inverse, pow_frac, ComposeMode};
pub use series::{ring_ops, LaurentSeries, RingOp, C64, RESIDUE_FREE_REL_TOL};

/// Shorthand for a complex number.
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}
