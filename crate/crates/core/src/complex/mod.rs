//! Finite complexes, infinite-cyclic-cover algebra, and cup products.

mod cell;
mod cover;
mod cup;
mod homology;
pub mod model;

pub use cell::{parse_complex_json, CellComplex, ComplexError, Incidence, IntegerCocycle};
pub use cover::{cover_complex, cover_complex_with_edge_order, TwistedChainComplex};
pub use cup::{cat_cup_lower_bound, CupError, CupRing, TwistedCochain};
pub use homology::{
    local_cohomology, movable_to_infinity, supp, twisted_homology, twisted_homology_of,
    HomologyError,
};
