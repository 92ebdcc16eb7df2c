//! Decomposition of finitely presented Λ-modules.
//!
//! Presentation convention, used everywhere in this crate: columns are
//! generators, rows are relations.

use super::matrix::LaurentMatrix;
use super::poly::LaurentPoly;
use super::snf::smith_normal_form;
use serde::Serialize;

/// Free rank plus torsion invariant factors of a finitely presented
/// Λ-module, factors in divisibility order and canonically normalized.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleDecomposition {
    pub free_rank: usize,
    #[serde(serialize_with = "serialize_factors")]
    pub torsion_factors: Vec<LaurentPoly>,
}

fn serialize_factors<S: serde::Serializer>(f: &[LaurentPoly], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(f.iter().map(|p| p.to_string()))
}

impl ModuleDecomposition {
    pub fn free(rank: usize) -> Self {
        Self {
            free_rank: rank,
            torsion_factors: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion_factors.is_empty()
    }

    /// Dimension of the torsion part as a k-vector space: Σ deg(factor).
    pub fn torsion_dimension(&self) -> usize {
        self.torsion_factors.iter().map(|f| f.span() as usize).sum()
    }
}

/// Λ^cols / (row span of `presentation`).
pub fn module_decompose(presentation: &LaurentMatrix) -> ModuleDecomposition {
    if presentation.rows() == 0 {
        return ModuleDecomposition::free(presentation.cols());
    }
    let snf = smith_normal_form(presentation);
    let rank = snf.rank();
    let torsion_factors: Vec<LaurentPoly> = snf
        .invariant_factors()
        .into_iter()
        .filter(|f| !f.is_unit())
        .collect();
    ModuleDecomposition {
        free_rank: presentation.cols() - rank,
        torsion_factors,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_int_terms(terms)
    }

    #[test]
    fn free_module_no_relations() {
        let m = LaurentMatrix::zeros(0, 1);
        let d = module_decompose(&m);
        assert_eq!(d.free_rank, 1);
        assert!(d.torsion_factors.is_empty());
    }

    #[test]
    fn single_torsion_factor() {
        // Λ/(τ−1): H₀ of the infinite cyclic cover of S¹
        let mut m = LaurentMatrix::zeros(1, 1);
        m.set(0, 0, p(&[(1, 1), (0, -1)]));
        let d = module_decompose(&m);
        assert_eq!(d.free_rank, 0);
        assert_eq!(d.torsion_factors, vec![p(&[(1, 1), (0, -1)])]);
        assert_eq!(d.torsion_dimension(), 1);
    }

    #[test]
    fn unit_entries_drop() {
        let mut m = LaurentMatrix::zeros(2, 2);
        m.set(0, 0, LaurentPoly::one());
        m.set(1, 1, p(&[(1, 1), (0, -2)]));
        let d = module_decompose(&m);
        assert_eq!(d.free_rank, 0);
        assert_eq!(d.torsion_factors, vec![p(&[(1, 1), (0, -2)])]);
    }
}
