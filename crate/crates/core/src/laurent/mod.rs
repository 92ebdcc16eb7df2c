//! Exact linear algebra over the Laurent polynomial ring Λ = ℚ[τ,τ⁻¹].

mod decompose;
mod matrix;
pub(crate) mod poly;
mod snf;
mod supp;

pub use decompose::{module_decompose, ModuleDecomposition};
pub use matrix::{LaurentError, LaurentMatrix};
pub use poly::LaurentPoly;
pub use snf::{smith_normal_form, SmithNormalForm};
pub use supp::{supp_of, SuppSet};
