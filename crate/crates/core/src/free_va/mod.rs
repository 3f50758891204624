//! The freely generated vertex superalgebra of a chart, realized as a
//! normal-ordered Fock space, together with the verification reports built
//! on it: conformal/Virasoro structure, zero modes of one-forms, lifted
//! differentials on bundle charts, fermion-number gradings, and the graded
//! character count.

pub mod conformal;
pub mod embed;
pub mod fock;
pub mod product;
pub mod reports;
pub mod structured;

pub use conformal::{conformal_element, virasoro_report, zero_mode_one_form};
pub use embed::{state_of_one_form, state_of_poly, state_of_vf, GeneratorDictionary};
pub use fock::{Field, FockState, GenMode};
pub use product::{borcherds_rhs, mode_commutator, nth_product};
pub use reports::graded_character;
