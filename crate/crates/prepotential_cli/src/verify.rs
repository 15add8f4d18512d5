//! The end-to-end comparison of third derivatives of the prepotential with
//! triple B-period contractions of `ω_{0,3}`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;
use std::time::Instant;

use hyperelliptic_sw::summary::{bergman_json, curve_json, periods_json};
use laurent_core::C64;

use crate::config::{from_c64, to_c64, VerifyConfig};
use crate::contract::{bperiod_contract, contracted};
use crate::error::CliError;
use crate::fd::{max_abs3, max_diff3, observed_order, richardson3, symmetry_defect, zeros3, Sampler, Tensor3};
use crate::pipeline::{quad_options, Reference};
use crate::report::{tensor_json, Check, Environment, VerifyReport};

/// The two overall signs under test: `∂³F = sign · (1/2πi)² · T`.
pub const CONVENTIONS: [(&str, f64); 2] = [("plus", 1.0), ("minus", -1.0)];

/// A report together with the side tables written next to it.
#[derive(Debug, Clone)]
pub struct VerifyOutcome {
    pub report: VerifyReport,
    /// `sgn_table.csv` contents.
    pub sgn_table_csv: String,
    /// `periods.json` contents.
    pub periods_json: serde_json::Value,
}

impl VerifyOutcome {
    /// Writes `report.json`, `sgn_table.csv` and `periods.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<(), CliError> {
        write_file(dir, "report.json", &serde_json::to_string_pretty(&self.report)?)?;
        write_file(dir, "sgn_table.csv", &self.sgn_table_csv)?;
        write_file(dir, "periods.json", &serde_json::to_string_pretty(&self.periods_json)?)
    }
}

/// Creates `dir` if needed and writes `name` into it.
pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    let io = |e, p: &Path| CliError::Io { path: p.display().to_string(), source: e };
    std::fs::create_dir_all(dir).map_err(|e| io(e, dir))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| io(e, &path))
}

/// JSON summary of the reference curve, its periods, kernel and local coefficients.
pub fn reference_json(r: &Reference) -> serde_json::Value {
    serde_json::json!({
        "curve": curve_json(&r.curve),
        "periods": periods_json(&r.periods, &r.cycles),
        "bergman": bergman_json(&r.bergman),
        "c_coeffs": r.expansions.c_json(),
        "s_coeffs": r.expansions.s_json(),
    })
}

/// Runs the verification and returns the report only.
pub fn verify_theorem(cfg: &VerifyConfig) -> Result<VerifyReport, CliError> {
    Ok(verify_theorem_full(cfg)?.report)
}

fn unit(d: &[C64]) -> Option<Vec<C64>> {
    let n = d.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    (n > 0.0).then(|| d.iter().map(|x| x / n).collect())
}

fn contract3(t: &Tensor3, d: &[C64]) -> C64 {
    let g = d.len();
    let mut v = C64::new(0.0, 0.0);
    for i in 0..g {
        for j in 0..g {
            for k in 0..g {
                v += t[i][j][k] * d[i] * d[j] * d[k];
            }
        }
    }
    v
}

/// Runs every stage and compares the finite-difference third derivatives
/// with the contraction under both sign conventions.
pub fn verify_theorem_full(cfg: &VerifyConfig) -> Result<VerifyOutcome, CliError> {
    cfg.validate()?;
    let start = Instant::now();
    let mut timing = BTreeMap::new();
    let tol = &cfg.tolerances;

    let reference = Reference::from_config(cfg)?;
    let g = reference.curve.genus();
    timing.insert("reference".to_string(), start.elapsed().as_secs_f64());

    let stage = Instant::now();
    let omega = reference.recursion(cfg.chi_max)?;
    let contraction = bperiod_contract(omega.table(), reference.expansions.c())?;
    let mut t = zeros3(g);
    for (i, row) in t.iter_mut().enumerate() {
        for (j, col) in row.iter_mut().enumerate() {
            for (k, x) in col.iter_mut().enumerate() {
                *x = contracted(&contraction, 0, 3, &[i, j, k]);
            }
        }
    }
    timing.insert("recursion".to_string(), stage.elapsed().as_secs_f64());

    let stage = Instant::now();
    let mut checks = Vec::new();
    let pd = &reference.periods;
    let tau_scale = pd.tau.iter().map(|x| x.norm()).fold(0.0, f64::max);
    checks.push(Check::bound("tau_symmetry", pd.tau_asymmetry() / tau_scale, tol.symmetry));

    let sampler = Sampler::new(
        reference.curve.lambda(),
        &reference.cycles,
        reference.curve.moduli(),
        pd,
        tol.newton,
        quad_options(cfg.precision),
    )?;
    let h = cfg.fd_step * sampler.a0().iter().map(|x| x.norm()).fold(1.0, f64::max);
    let d_h = sampler.tau_route(h)?;
    let d_half = sampler.tau_route(0.5 * h)?;
    let fd = richardson3(&d_h, &d_half);
    let fd_scale = max_abs3(&fd).max(f64::MIN_POSITIVE);

    let b_route = richardson3(&sampler.b_route(h)?, &sampler.b_route(0.5 * h)?);
    checks.push(Check::bound("fd_routes_agree", max_diff3(&fd, &b_route) / fd_scale, tol.route_rel));
    checks.push(Check::bound("fd_tensor_symmetry", symmetry_defect(&fd), tol.symmetry));
    let order = observed_order(&d_h, &sampler.tau_route(2.0 * h)?, &sampler.tau_route(4.0 * h)?);
    checks.push(Check::at_least("fd_observed_order", order, tol.min_order));

    // Largest entry of the derivative tensor, used as the displayed value of tensor checks.
    let mut top = (0, 0, 0);
    for i in 0..g {
        for j in 0..g {
            for k in 0..g {
                if fd[i][j][k].norm() > fd[top.0][top.1][top.2].norm() {
                    top = (i, j, k);
                }
            }
        }
    }
    let factor = C64::new(0.0, 2.0 * PI).powi(-2);
    let mut worst = BTreeMap::new();
    for (label, sign) in CONVENTIONS {
        let pred: Tensor3 = t.iter().map(|a| a.iter().map(|b| b.iter().map(|x| x * factor * sign).collect()).collect()).collect();
        let rel = max_diff3(&fd, &pred) / fd_scale;
        let mut c = Check::relative(&format!("theorem_tensor_{label}"), fd[top.0][top.1][top.2], pred[top.0][top.1][top.2], tol.theorem_rel);
        c.rel_err = rel;
        c.passed = rel <= tol.theorem_rel;
        let mut label_worst = rel;
        checks.push(c.optional());
        for i in 0..g {
            for j in i..g {
                for k in j..g {
                    let mut c = Check::relative(&format!("theorem_{label}_{i}{j}{k}"), fd[i][j][k], pred[i][j][k], tol.theorem_rel);
                    // Entries are compared on the scale of the whole tensor.
                    c.rel_err = c.abs_err / fd_scale;
                    c.passed = c.rel_err <= tol.theorem_rel;
                    label_worst = label_worst.max(c.rel_err);
                    checks.push(c.optional());
                }
            }
        }
        for (n, d) in cfg.delta_a.iter().enumerate() {
            let name = format!("theorem_direction{n}_{label}");
            let d: Vec<C64> = d.iter().map(|&x| to_c64(x)).collect();
            let Some(dir) = unit(&d) else {
                let zero = C64::new(0.0, 0.0);
                checks.push(Check::absolute(&name, zero, zero, tol.theorem_rel).optional().non_informative());
                continue;
            };
            let coarse = sampler.directional(&dir, h)?;
            let fine = sampler.directional(&dir, 0.5 * h)?;
            let lhs = (fine * 4.0 - coarse) / 3.0;
            let c = Check::relative(&name, lhs, contract3(&pred, &dir), tol.theorem_rel);
            label_worst = label_worst.max(c.rel_err);
            checks.push(c.optional());
        }
        worst.insert(label, label_worst);
    }
    let matched = CONVENTIONS.iter().map(|&(l, _)| l).find(|l| worst[l] <= tol.theorem_rel);
    let best = worst.values().copied().fold(f64::INFINITY, f64::min);
    checks.push(Check::bound("theorem_one_convention", best, tol.theorem_rel));
    timing.insert("finite_differences".to_string(), stage.elapsed().as_secs_f64());
    timing.insert("total".to_string(), start.elapsed().as_secs_f64());

    let passed = checks.iter().all(|c| !c.mandatory || c.passed);
    let report = VerifyReport {
        passed,
        sign_convention: matched.map(str::to_string),
        checks,
        config: cfg.clone(),
        genus: g,
        u0: reference.curve.moduli().iter().map(|&x| from_c64(x)).collect(),
        a0: pd.a.iter().map(|&x| from_c64(x)).collect(),
        intersection_matrix: reference.cycles.intersection_matrix.clone(),
        fd_tensor: tensor_json(&fd),
        contraction_tensor: tensor_json(&t),
        newton_solves: sampler.solves(),
        environment: Environment::current(),
        timing,
    };
    Ok(VerifyOutcome { report, sgn_table_csv: omega.table().to_csv(), periods_json: reference_json(&reference) })
}
