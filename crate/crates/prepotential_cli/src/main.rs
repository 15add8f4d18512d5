//! `swtr`: command-line front end of the verification pipeline.

use std::path::PathBuf;
use std::process::ExitCode;

use airy_engine::RamLabels;
use clap::{Parser, Subcommand, ValueEnum};
use spectral_recursion::{eo_run, seeded_symmetric_s, support_bound_check, LocalSpectralCurve};

use prepotential_cli::config::Precision;
use prepotential_cli::pipeline::{needed_kmax, Reference};
use prepotential_cli::verify::{reference_json, verify_theorem_full, write_file};
use prepotential_cli::{airy_selftest, CliError, VerifyConfig, EXIT_CHECK_FAILED};

/// Scale of the seeded regular part used by `eo-run --s seeded`.
const SEEDED_S_SCALE: f64 = 0.4;
/// Tolerance of the symmetry and support checks of `eo-run`.
const EO_CHECK_TOL: f64 = 1e-10;

#[derive(Parser)]
#[command(name = "swtr", version, about = "Topological recursion and Seiberg-Witten prepotential checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SChoice {
    /// Vanishing regular part.
    Zero,
    /// Seeded random symmetric regular part.
    Seeded,
}

#[derive(Subcommand)]
enum Command {
    /// Golden values of the Airy tensors and of the abstract recursion.
    AirySelftest {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs the local recursion and prints the output table as CSV.
    EoRun {
        /// Number of ramification points.
        #[arg(long, default_value_t = 1)]
        points: usize,
        #[arg(long, value_enum, default_value = "zero")]
        s: SChoice,
        #[arg(long, default_value_t = 2)]
        chi_max: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Builds the reference curve of a configuration and dumps its periods and kernel data.
    SwPeriods {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        precision: Option<Precision>,
    },
    /// Full pipeline: compares third derivatives of the prepotential with the contraction.
    VerifyTheorem {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        chi_max: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Relative tolerance of the theorem comparison.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum)]
        precision: Option<Precision>,
    },
}

fn verdict(passed: bool) -> i32 {
    if passed {
        0
    } else {
        EXIT_CHECK_FAILED
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::AirySelftest { out } => {
            let report = airy_selftest()?;
            let text = serde_json::to_string_pretty(&report)?;
            println!("{text}");
            if let Some(dir) = out {
                write_file(&dir, "report.json", &text)?;
            }
            Ok(verdict(report.passed))
        }
        Command::EoRun { points, s, chi_max, seed, out } => {
            if points == 0 || chi_max == 0 {
                return Err(CliError::Config("--points and --chi-max must be positive".into()));
            }
            let ram = RamLabels::numbered(points);
            let kmax = needed_kmax(chi_max);
            let curve = match s {
                SChoice::Zero => LocalSpectralCurve::airy(ram, kmax),
                SChoice::Seeded => {
                    let s = seeded_symmetric_s(&ram, kmax, SEEDED_S_SCALE, true, seed);
                    LocalSpectralCurve::with_s(ram, kmax, s)?
                }
            };
            let omega = eo_run(&curve, chi_max)?;
            let csv = omega.table().to_csv();
            print!("{csv}");
            if let Some(dir) = out {
                write_file(&dir, "sgn_table.csv", &csv)?;
            }
            let ok = omega.symmetry_defect() < EO_CHECK_TOL && support_bound_check(&omega, EO_CHECK_TOL).all_ok();
            Ok(verdict(ok))
        }
        Command::SwPeriods { config, out, precision } => {
            let mut cfg = VerifyConfig::load(&config)?;
            if let Some(p) = precision {
                cfg.precision = p;
            }
            let r = Reference::from_config(&cfg)?;
            let text = serde_json::to_string_pretty(&reference_json(&r))?;
            println!("{text}");
            if let Some(dir) = out.or(cfg.out_dir) {
                write_file(&dir, "periods.json", &text)?;
            }
            let scale = r.periods.tau.iter().map(|x| x.norm()).fold(0.0, f64::max);
            Ok(verdict(r.periods.tau_asymmetry() <= cfg.tolerances.symmetry * scale))
        }
        Command::VerifyTheorem { config, chi_max, out, seed, tol, precision } => {
            let mut cfg = VerifyConfig::load(&config)?;
            if let Some(c) = chi_max {
                cfg.chi_max = c;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(t) = tol {
                cfg.tolerances.theorem_rel = t;
            }
            if let Some(p) = precision {
                cfg.precision = p;
            }
            if let Some(dir) = out {
                cfg.out_dir = Some(dir);
            }
            let outcome = verify_theorem_full(&cfg)?;
            if let Some(dir) = &cfg.out_dir {
                outcome.write(dir)?;
            }
            let r = &outcome.report;
            for c in &r.checks {
                let mark = if c.passed { "PASS" } else { "FAIL" };
                let kind = if c.mandatory { "" } else { " (optional)" };
                println!("{mark} {:<32} err {:.3e} tol {:.1e}{kind}", c.name, c.rel_err, c.tolerance);
            }
            println!("sign convention: {}", r.sign_convention.as_deref().unwrap_or("none"));
            println!("overall: {}", if r.passed { "PASS" } else { "FAIL" });
            Ok(verdict(r.passed))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("swtr: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
