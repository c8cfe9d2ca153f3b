//! Exact evaluation of the R-matrix knot polynomials `V_n(t, q)`.
//!
//! Diagrams are parsed from PD codes, opened into upright long diagrams,
//! turned into tensor networks over an R-matrix bundle and contracted in a
//! greedily planned order with exact integer Laurent arithmetic.

pub mod analysis;
pub mod diagram;
pub mod engine;
pub mod poly;
pub mod rmatrix;

pub use poly::{Int, LaurentPoly, PolyError, UForm, Var};
