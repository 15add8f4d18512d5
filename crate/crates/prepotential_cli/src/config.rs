//! Verification configuration: JSON loading, defaults and validation.

use std::path::{Path, PathBuf};

use laurent_core::C64;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// A complex number written as `[re, im]`.
pub type Complex = [f64; 2];

/// Converts a `[re, im]` pair.
pub fn to_c64(v: Complex) -> C64 {
    C64::new(v[0], v[1])
}

/// Converts to a `[re, im]` pair.
pub fn from_c64(v: C64) -> Complex {
    [v.re + 0.0, v.im + 0.0]
}

/// Arithmetic used by the quadrature and extraction layers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    /// Default tolerances.
    Double,
    /// Tighter quadrature and extraction tolerances, still in `f64`.
    Extended,
}

/// Truncation orders of the series layers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SeriesOrders {
    /// Order of the chart series.
    pub chart_order: i32,
    /// Largest mode number of the local expansions.
    pub kmax: u32,
}

impl Default for SeriesOrders {
    fn default() -> Self {
        SeriesOrders { chart_order: 40, kmax: 5 }
    }
}

/// Tolerances of the individual checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Relative error of the third derivatives against the contraction.
    pub theorem_rel: f64,
    /// Relative agreement of the two finite-difference routes.
    pub route_rel: f64,
    /// Relative symmetry defect of the derivative tensor.
    pub symmetry: f64,
    /// Relative residual of the Newton inversion `a -> u`.
    pub newton: f64,
    /// Smallest acceptable observed order of the central differences.
    pub min_order: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { theorem_rel: 1e-3, route_rel: 1e-5, symmetry: 1e-6, newton: 1e-10, min_order: 1.8 }
    }
}

/// Everything `verify-theorem` needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    /// Genus of the curve.
    pub genus: usize,
    /// Reference moduli; drawn from `seed` when absent.
    pub u0: Option<Vec<Complex>>,
    /// Scale `Λ` of the curve.
    pub lambda: Complex,
    /// Displacement directions in `a`-space; each gives a directional third derivative.
    pub delta_a: Vec<Vec<Complex>>,
    /// Largest `2g - 2 + n` of the recursion run.
    pub chi_max: u32,
    /// Series truncation orders.
    pub orders: SeriesOrders,
    /// Check tolerances.
    pub tolerances: Tolerances,
    /// Base finite-difference step, scaled by `max(1, |a|)`.
    pub fd_step: f64,
    /// Seed for drawing reference moduli.
    pub seed: u64,
    /// Arithmetic setting.
    pub precision: Precision,
    /// Directory receiving `report.json`, `sgn_table.csv` and `periods.json`.
    pub out_dir: Option<PathBuf>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            genus: 1,
            u0: None,
            lambda: [1.0, 0.0],
            delta_a: Vec::new(),
            chi_max: 1,
            orders: SeriesOrders::default(),
            tolerances: Tolerances::default(),
            fd_step: 1e-3,
            seed: 0,
            precision: Precision::Double,
            out_dir: None,
        }
    }
}

impl VerifyConfig {
    /// Configuration for a given genus and reference point, with one
    /// displacement direction per coordinate axis.
    pub fn for_point(genus: usize, u0: Option<&[C64]>) -> Self {
        let delta_a = (0..genus)
            .map(|i| (0..genus).map(|j| if i == j { [1.0, 0.0] } else { [0.0, 0.0] }).collect())
            .collect();
        VerifyConfig {
            genus,
            u0: u0.map(|u| u.iter().map(|&x| from_c64(x)).collect()),
            delta_a,
            ..VerifyConfig::default()
        }
    }

    /// Reads and validates a JSON configuration file.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let cfg: VerifyConfig =
            serde_json::from_str(&text).map_err(|e| CliError::Config(format!("cannot parse {}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks the invariants of the configuration.
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        if self.genus == 0 {
            return bad("genus must be at least 1".into());
        }
        if self.chi_max < 1 {
            return bad("chi_max must be at least 1".into());
        }
        if self.delta_a.is_empty() {
            return bad("delta_a grid must not be empty".into());
        }
        if let Some(v) = self.delta_a.iter().find(|v| v.len() != self.genus) {
            return bad(format!("delta_a entry {v:?} does not have {} components", self.genus));
        }
        if let Some(u) = &self.u0 {
            if u.len() != self.genus {
                return bad(format!("u0 has {} components, genus is {}", u.len(), self.genus));
            }
        }
        let t = &self.tolerances;
        let positive = [t.theorem_rel, t.route_rel, t.symmetry, t.newton, t.min_order, self.fd_step];
        if positive.iter().any(|&x| !(x.is_finite() && x > 0.0)) {
            return bad("tolerances and fd_step must be positive".into());
        }
        if self.orders.kmax < 1 || self.orders.chart_order < 8 {
            return bad("orders.kmax must be at least 1 and orders.chart_order at least 8".into());
        }
        if to_c64(self.lambda).norm() == 0.0 {
            return bad("lambda must be nonzero".into());
        }
        Ok(())
    }
}
