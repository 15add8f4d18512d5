//! Error type shared by all series operations.

use thiserror::Error;

/// Failures raised by series arithmetic.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    /// The divisor has no nonzero coefficient inside its known window.
    #[error("division by a series that is zero up to its truncation order")]
    DivisionByZeroSeries,
    /// Functional inversion requested for a series without an invertible linear term.
    #[error("series is not invertible: {0}")]
    NotInvertible(String),
    /// A fractional power whose leading exponent does not divide evenly.
    #[error("fractional power undefined: leading exponent {m} times {p} is not divisible by {q}")]
    BranchUndefined { m: i32, p: i32, q: i32 },
    /// A primitive or pairing was requested on a differential with a residue.
    #[error("differential has nonzero residue {re:e}{im:+e}i")]
    NonzeroResidue { re: f64, im: f64 },
    /// The operation would produce infinitely many coefficients from exact inputs.
    #[error("operation on exact series needs an explicit truncation order")]
    TruncationRequired,
    /// A coefficient was requested beyond the known window.
    #[error("coefficient of exponent {needed} requested but series is only known up to {known}")]
    TruncationInsufficient { needed: i32, known: i32 },
    /// Composition with an inner series that does not vanish at the origin.
    #[error("composition requires an inner series with positive valuation")]
    InvalidComposition,
}
