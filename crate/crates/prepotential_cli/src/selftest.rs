//! Golden values of the Airy tensors and of the abstract recursion.

use airy_engine::{
    atr_run, build_residue_constraint_tensors, residue_formula_tensors, AiryTensors, ModeIndex, RamLabels,
};
use laurent_core::C64;
use serde::Serialize;

use crate::error::CliError;
use crate::report::Check;

/// Index bound of the self-test tensors.
pub const SELFTEST_KMAX: u32 = 15;
/// Absolute tolerance of the tensor golden values.
pub const TENSOR_TOL: f64 = 1e-12;
/// Absolute tolerance of the recursion golden values.
pub const TABLE_TOL: f64 = 1e-13;

/// Outcome of `airy-selftest`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelftestReport {
    pub passed: bool,
    pub checks: Vec<Check>,
}

/// Checks `a_111 = 1/4`, `ε_3 = 1/16`, agreement of the builder with the
/// residue formula, and `S_{0,3;111} = 1/2`, `S_{1,1;3} = 1/16`.
pub fn airy_selftest() -> Result<SelftestReport, CliError> {
    let m = |k| ModeIndex::new(k, 0);
    let single = RamLabels::single();
    let t = build_residue_constraint_tensors(SELFTEST_KMAX, &single);
    let mut checks = vec![
        Check::absolute("a_111", t.a(m(1), m(1), m(1)), C64::new(0.25, 0.0), TENSOR_TOL),
        Check::absolute("eps_3", t.eps(m(3)), C64::new(1.0 / 16.0, 0.0), TENSOR_TOL),
    ];
    for labels in [1, 2] {
        let ram = RamLabels::numbered(labels);
        let built: AiryTensors = build_residue_constraint_tensors(SELFTEST_KMAX, &ram);
        let residue = residue_formula_tensors(SELFTEST_KMAX, &ram);
        checks.push(Check::bound(&format!("residue_formula_{labels}_labels"), built.max_difference(&residue), TENSOR_TOL));
    }
    let table = atr_run(&t, 2)?;
    checks.push(Check::absolute("S_03_111", table.get(0, 3, &[m(1), m(1), m(1)]), C64::new(0.5, 0.0), TABLE_TOL));
    checks.push(Check::absolute("S_11_3", table.get(1, 1, &[m(3)]), C64::new(1.0 / 16.0, 0.0), TABLE_TOL));
    let passed = checks.iter().all(|c| c.passed);
    Ok(SelftestReport { passed, checks })
}
