//! Novikov-type invariants on finite complexes and gradient flows of
//! closed 1-forms on model manifolds.
//!
//! The crate has four parts:
//! - [`laurent`]: exact module algebra over Λ = ℚ[τ,τ⁻¹] (Smith normal
//!   form, torsion decompositions, Supp),
//! - [`complex`]: finite CW/simplicial complexes, infinite-cyclic-cover
//!   chain complexes, twisted cohomology and cup-product bounds,
//! - [`flow`]: negative-gradient-flow numerics (zeros, Lyapunov boxes,
//!   heteroclinic edges, homoclinic cycles, hypothesis checks),
//! - [`cat`]: symbolic interval bounds on cat(X,ω) and the
//!   homoclinic-cycle prediction verdict.

pub mod cat;
pub mod complex;
pub mod flow;
pub mod laurent;
pub mod linalg;

pub use laurent::{LaurentMatrix, LaurentPoly, ModuleDecomposition, SuppSet};
