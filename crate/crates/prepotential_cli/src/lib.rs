//! Orchestration of the prepotential verification: configuration, the
//! reference-curve pipeline, B-period contraction of recursion outputs,
//! finite-difference derivatives of the prepotential and the report.

pub mod config;
pub mod contract;
pub mod error;
pub mod fd;
pub mod pipeline;
pub mod report;
pub mod selftest;
pub mod verify;

pub use config::{Precision, SeriesOrders, Tolerances, VerifyConfig};
pub use contract::{bperiod_contract, contracted, ContractKey};
pub use error::{CliError, EXIT_CHECK_FAILED, EXIT_CONFIG};
pub use pipeline::Reference;
pub use report::{Check, VerifyReport};
pub use selftest::{airy_selftest, SelftestReport};
pub use verify::{verify_theorem, verify_theorem_full, VerifyOutcome, CONVENTIONS};
