//! Hyperelliptic Seiberg–Witten curves: cycles, periods, the normalized
//! Bergman kernel, standard charts and local expansions.

pub mod bergman;
pub mod charts;
pub mod contour;
pub mod curve;
pub mod embed;
pub mod cycles;
pub mod error;
pub mod expansions;
pub mod periods;
pub mod poly;
pub mod summary;

pub use bergman::{bergman_kernel, BergmanData, CurvePoint};
pub use charts::{standard_charts, StandardChart};
pub use contour::{integrate_path, CirclePath, LoopPath, Path, QuadOptions, QuadResult, SegmentPath};
pub use curve::{new_curve, new_curve_with_tol, RamPoint, SWCurve};
pub use cycles::{build_cycles, CycleBasis};
pub use error::SwError;
pub use periods::{periods, periods_with, PeriodData};
pub use embed::{decompose_in_G, sw_embed_global, Decomposition};
pub use expansions::{ebar_periods, local_expansions, local_expansions_with, EbarEvaluator, ExpansionOptions, LocalExpansions};
