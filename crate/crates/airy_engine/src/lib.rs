//! Airy structures from residue constraints as explicit sparse tensors.
//!
//! The crate builds the tensors `(A, B, C, ε)` of the residue-constraint
//! Hamiltonians and of their variant with one factor pulled back under
//! `z -> -z`, evaluates the Hamiltonians on labeled Laurent data, applies
//! gauge transformations `(c, d, s)`, runs the abstract topological
//! recursion into an [`SgnTable`], and embeds deformed Airy discs.

mod atr;
mod disc;
mod error;
mod gauge;
mod hamiltonians;
mod index;
mod tensors;
mod welement;

pub use atr::{
    atr_run, atr_symmetry_defect, cells_up_to, computed_mode_bound, is_stable, support_bound, SgnRow, SgnTable,
    SymTensor, SymmetryReport, MAX_FLAT_INDEX, MAX_SLOTS,
};
pub use disc::{embed_disc, triviality_search, TrivialitySearchConfig, TrivialitySearchReport};
pub use error::AiryError;
pub use gauge::{gauge_transform, validate_gauge, GaugeCheck, GaugeData, GaugeReport, GAUGE_TOL};
pub use hamiltonians::{eval_hamiltonians, eval_hamiltonians_from_tensors, max_abs_value};
pub use index::{ModeIndex, RamLabels};
pub use tensors::{
    build_residue_constraint_tensors, build_tr_variant_tensors, residue_formula_dense, residue_formula_tensors,
    AiryTensors, DenseTensors, Variant, SYMMETRY_TOL,
};
pub use welement::WElement;
