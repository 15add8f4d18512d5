//! JSON summaries of curves, periods and kernels. Complex numbers are written
//! as `[re, im]` pairs.

use nalgebra::DMatrix;
use serde_json::{json, Value};

use laurent_core::C64;

use crate::bergman::BergmanData;
use crate::curve::SWCurve;
use crate::cycles::CycleBasis;
use crate::periods::PeriodData;

/// `[re, im]`.
pub fn complex(v: C64) -> Value {
    json!([v.re, v.im])
}

/// A list of complex numbers.
pub fn complex_list(v: &[C64]) -> Value {
    Value::Array(v.iter().map(|x| complex(*x)).collect())
}

/// A complex matrix as a list of rows.
pub fn complex_matrix(m: &DMatrix<C64>) -> Value {
    Value::Array((0..m.nrows()).map(|i| Value::Array((0..m.ncols()).map(|j| complex(m[(i, j)])).collect())).collect())
}

/// Moduli, branch points and ramification data.
pub fn curve_json(c: &SWCurve) -> Value {
    let ram: Vec<Value> = c
        .ram_points()
        .iter()
        .map(|r| json!({"label": r.label, "z": complex(r.z), "p_value": complex(r.p_value), "y": complex(r.y), "w": complex(r.w)}))
        .collect();
    json!({
        "genus": c.genus(),
        "lambda": complex(c.lambda()),
        "moduli": complex_list(c.moduli()),
        "p_coeffs": complex_list(c.p_coeffs()),
        "branch_points": complex_list(c.branch_points()),
        "critical_points": complex_list(c.critical_points()),
        "ramification_points": ram,
        "sheet_convention": c.sheet_convention(),
    })
}

/// Cycle combinations, intersection matrix and periods.
pub fn periods_json(pd: &PeriodData, cyc: &CycleBasis) -> Value {
    json!({
        "a": complex_list(&pd.a),
        "b": complex_list(&pd.b),
        "tau": complex_matrix(&pd.tau),
        "tau_asymmetry": pd.tau_asymmetry(),
        "norm_matrix": complex_matrix(&pd.norm_matrix),
        "cycles": {"chain": complex_list(&cyc.chain), "a": cyc.a, "b": cyc.b, "intersection_matrix": cyc.intersection_matrix},
        "max_nodes": pd.max_nodes,
    })
}

/// Correction matrix of the normalized kernel and its fit diagnostics.
pub fn bergman_json(b: &BergmanData) -> Value {
    json!({
        "correction_matrix": complex_matrix(b.correction_matrix()),
        "correction_asymmetry": b.correction_asymmetry(),
        "fit_residual": b.fit_residual(),
    })
}
