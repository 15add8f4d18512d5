//! Check records and the verification report.

use std::collections::BTreeMap;

use laurent_core::C64;
use serde::Serialize;

use crate::config::{from_c64, Complex, VerifyConfig};

/// One comparison `lhs ≈ rhs`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub lhs: Complex,
    pub rhs: Complex,
    pub abs_err: f64,
    pub rel_err: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Mandatory checks decide the overall verdict.
    pub mandatory: bool,
    /// False for comparisons that hold trivially, such as a zero displacement.
    pub informative: bool,
}

impl Check {
    /// Compares two values with a relative tolerance; the relative error uses `max(|lhs|, |rhs|)`.
    pub fn relative(name: &str, lhs: C64, rhs: C64, tolerance: f64) -> Self {
        let abs_err = (lhs - rhs).norm();
        let scale = lhs.norm().max(rhs.norm());
        let rel_err = if scale > 0.0 { abs_err / scale } else { 0.0 };
        Check {
            name: name.to_string(),
            lhs: from_c64(lhs),
            rhs: from_c64(rhs),
            abs_err,
            rel_err,
            tolerance,
            passed: rel_err <= tolerance,
            mandatory: true,
            informative: true,
        }
    }

    /// Compares two values with an absolute tolerance.
    pub fn absolute(name: &str, lhs: C64, rhs: C64, tolerance: f64) -> Self {
        let mut c = Check::relative(name, lhs, rhs, tolerance);
        c.passed = c.abs_err <= tolerance;
        c
    }

    /// A scalar measure that must not exceed `tolerance`.
    pub fn bound(name: &str, value: f64, tolerance: f64) -> Self {
        Check {
            name: name.to_string(),
            lhs: [value, 0.0],
            rhs: [0.0, 0.0],
            abs_err: value,
            rel_err: value,
            tolerance,
            passed: value <= tolerance,
            mandatory: true,
            informative: true,
        }
    }

    /// A scalar measure that must reach at least `minimum`.
    pub fn at_least(name: &str, value: f64, minimum: f64) -> Self {
        let mut c = Check::bound(name, value, minimum);
        c.passed = value >= minimum;
        c
    }

    /// Marks the check as not deciding the verdict.
    pub fn optional(mut self) -> Self {
        self.mandatory = false;
        self
    }

    /// Marks the check as trivially satisfied.
    pub fn non_informative(mut self) -> Self {
        self.informative = false;
        self
    }
}

/// Runtime environment recorded with a report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Environment {
    pub package: String,
    pub version: String,
    pub os: String,
    pub arch: String,
}

impl Environment {
    /// The current environment.
    pub fn current() -> Self {
        Environment {
            package: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            os: std::env::consts::OS.to_string(),
            arch: std::env::consts::ARCH.to_string(),
        }
    }
}

/// Outcome of `verify-theorem`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    /// True iff every mandatory check passed.
    pub passed: bool,
    /// `"plus"` when `∂³F = (1/2πi)² T` matched, `"minus"` for `-(1/2πi)² T`, absent when neither did.
    pub sign_convention: Option<String>,
    pub checks: Vec<Check>,
    pub config: VerifyConfig,
    pub genus: usize,
    pub u0: Vec<Complex>,
    pub a0: Vec<Complex>,
    /// Intersection matrix of the cycle basis in the order `A_1..A_g, B_1..B_g`.
    pub intersection_matrix: Vec<Vec<i32>>,
    /// `[i][j][k]` finite-difference estimate of `∂_i ∂_j ∂_k F` (Richardson-extrapolated `τ` route).
    pub fd_tensor: Vec<Vec<Vec<Complex>>>,
    /// `[i][j][k]` triple B-period contraction `T_{ijk}` of `ω_{0,3}`.
    pub contraction_tensor: Vec<Vec<Vec<Complex>>>,
    pub newton_solves: usize,
    pub environment: Environment,
    /// Seconds per stage.
    pub timing: BTreeMap<String, f64>,
}

impl VerifyReport {
    /// Mandatory checks that failed.
    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| c.mandatory && !c.passed).collect()
    }

    /// A check by name.
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// The report with the timing fields cleared, for comparing runs.
    pub fn without_timing(&self) -> Self {
        VerifyReport { timing: BTreeMap::new(), ..self.clone() }
    }
}

/// Converts a tensor for serialization.
pub fn tensor_json(t: &[Vec<Vec<C64>>]) -> Vec<Vec<Vec<Complex>>> {
    t.iter().map(|a| a.iter().map(|b| b.iter().map(|&x| from_c64(x)).collect()).collect()).collect()
}
