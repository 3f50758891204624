//! Exact symbolic engine for chiral differential operators on polynomial
//! super-charts.
//!
//! The engine works over charts `A^{p|q}` with `p` even and `q` odd
//! polynomial coordinates and Gaussian-rational coefficients. It constructs
//! vertex superalgebroids (coordinate, connection-based, Lie, transported),
//! realizes the freely generated vertex superalgebra as a normal-ordered
//! Fock space, verifies the algebraic identities these structures satisfy
//! (axioms, conformal structure, coordinate-change laws, supersymmetry
//! lifts, supertrace lemmas), and computes elliptic-genus style q-series by
//! formal Hirzebruch-Riemann-Roch on toy cohomology models.
//!
//! Every computation is exact: coefficients are Gaussian rationals, series
//! are truncated with exact coefficients, and every check is an equality of
//! canonical forms, never a numerical comparison.

pub mod scalars;
pub mod superpoly;
pub mod algebroid;
pub mod free_va;
pub mod coord_change;
pub mod cs_geometry;
pub mod genus;
pub mod report;
pub mod sampler;
pub mod selftest;
