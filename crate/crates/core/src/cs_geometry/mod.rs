//! Parity-reversed bundle charts and their lifted calculus.
//!
//! A chart models functions on the parity reversal of a bundle `E -> M`
//! (fiber coordinates are an odd frame of the dual bundle) or, in the
//! Dolbeault variant, of `conj(TM) + E` over a complex base. Base and
//! bundle connections lift to the distinguished vector fields `D_X`
//! (covariant differentiation), `I_sigma` (contraction), degree operators
//! `J`, `J^r`, `J^l`, and the odd differential `Q`; their brackets close on
//! curvature contractions. The affine connection they induce on the chart
//! tangent sheaf is assembled both in the adapted frame (block rules) and
//! in the coordinate frame (as input for connection-based structures), and
//! every bracket/curvature/supertrace identity is verified exactly.

mod charts;
mod lemmas;

pub use charts::{mat_add, mat_d, mat_mul, mat_trace, mat_zero, sample_base_matrix, BaseMatrix, BundleChart, ChartModel, LiftedField};
pub use lemmas::{
    affine_connection_report, bracket_table_report, operator_curvature, q_operator_report,
    supertrace_report,
};
