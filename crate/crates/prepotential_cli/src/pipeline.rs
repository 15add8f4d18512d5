//! The reference-curve stages: curve, cycles, periods, kernel, charts, local
//! expansions and the recursion run on the extracted local curve.

use airy_engine::{cells_up_to, computed_mode_bound};
use hyperelliptic_sw::charts::{fit_to_cycles, standard_charts_with_order};
use hyperelliptic_sw::{
    bergman_kernel, build_cycles, local_expansions_with, new_curve, periods_with, BergmanData, CycleBasis,
    ExpansionOptions, LocalExpansions, PeriodData, QuadOptions, SWCurve, StandardChart,
};
use laurent_core::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectral_recursion::{eo_run, LocalSpectralCurve, OmegaGN};

use crate::config::{to_c64, Precision, VerifyConfig};
use crate::error::CliError;

/// Half-width of the box from which reference moduli are drawn.
const SEEDED_BOX: f64 = 0.35;
/// Number of draws before a seeded reference point is given up.
const SEEDED_ATTEMPTS: usize = 32;

/// Quadrature options for a precision setting.
pub fn quad_options(p: Precision) -> QuadOptions {
    match p {
        Precision::Double => QuadOptions::default(),
        Precision::Extended => QuadOptions { rel_tol: 1e-14, abs_tol: 1e-15, ..QuadOptions::default() },
    }
}

/// Largest mode number the recursion needs for `2g - 2 + n ≤ chi_max`.
pub fn needed_kmax(chi_max: u32) -> u32 {
    cells_up_to(chi_max).iter().map(|&(g, n)| computed_mode_bound(g, n)).max().unwrap_or(1)
}

/// All reference-curve data of one verification run.
#[derive(Debug, Clone)]
pub struct Reference {
    pub curve: SWCurve,
    pub cycles: CycleBasis,
    pub periods: PeriodData,
    pub bergman: BergmanData,
    pub charts: Vec<StandardChart>,
    pub expansions: LocalExpansions,
}

impl Reference {
    /// Builds every stage at the moduli `u`.
    pub fn build(genus: usize, u: &[C64], lambda: C64, cfg: &VerifyConfig) -> Result<Self, CliError> {
        let curve = new_curve(genus, u, lambda)?;
        let cycles = build_cycles(&curve)?;
        let periods = periods_with(&curve, &cycles, &quad_options(cfg.precision))?;
        let bergman = bergman_kernel(&curve, &cycles, &periods)?;
        let mut charts = standard_charts_with_order(&curve, &curve, cfg.orders.chart_order)?;
        fit_to_cycles(&mut charts, &cycles);
        let mut opts = ExpansionOptions { kmax: cfg.orders.kmax.max(needed_kmax(cfg.chi_max)), ..ExpansionOptions::default() };
        if cfg.precision == Precision::Extended {
            opts.rel_tol = 1e-13;
        }
        let expansions = local_expansions_with(&bergman, &charts, &opts)?;
        Ok(Reference { curve, cycles, periods, bergman, charts, expansions })
    }

    /// Builds the reference of a configuration, drawing the moduli from the seed when absent.
    pub fn from_config(cfg: &VerifyConfig) -> Result<Self, CliError> {
        let lambda = to_c64(cfg.lambda);
        if let Some(u) = &cfg.u0 {
            let u: Vec<C64> = u.iter().map(|&x| to_c64(x)).collect();
            return Reference::build(cfg.genus, &u, lambda, cfg);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut last = None;
        for _ in 0..SEEDED_ATTEMPTS {
            let u: Vec<C64> = (0..cfg.genus)
                .map(|_| C64::new(rng.random_range(-SEEDED_BOX..SEEDED_BOX), rng.random_range(-SEEDED_BOX..SEEDED_BOX)))
                .collect();
            match Reference::build(cfg.genus, &u, lambda, cfg) {
                Ok(r) => return Ok(r),
                Err(e) => last = Some(e),
            }
        }
        Err(last.expect("at least one attempt was made"))
    }

    /// The local spectral curve carrying the extracted regular part of the kernel.
    pub fn local_curve(&self) -> Result<LocalSpectralCurve, CliError> {
        let le = &self.expansions;
        Ok(LocalSpectralCurve::with_s(le.ram().clone(), le.kmax(), le.s().clone())?)
    }

    /// Runs the recursion on [`local_curve`](Self::local_curve).
    pub fn recursion(&self, chi_max: u32) -> Result<OmegaGN, CliError> {
        Ok(eo_run(&self.local_curve()?, chi_max)?)
    }
}
