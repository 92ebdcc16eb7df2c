//! Twisted homology of the infinite cyclic cover, as Λ-modules.

use super::cell::{CellComplex, ComplexError, IntegerCocycle};
use super::cover::{cover_complex, TwistedChainComplex};
use crate::laurent::{
    module_decompose, smith_normal_form, LaurentMatrix, LaurentPoly, ModuleDecomposition, SuppSet,
};
use crate::laurent::supp_of;
use num::rational::BigRational;
use num::Zero;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HomologyError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("input chain is not a cycle in the twisted complex")]
    NotACycle,
    #[error("chain length {got} does not match {expected} cells in degree {degree}")]
    ChainLength { degree: usize, expected: usize, got: usize },
    #[error("twist parameter must be nonzero")]
    ZeroTwist,
}

/// H_d(M̃;k) as a Λ-module, presented on a kernel basis of ∂_d with
/// relations from im ∂_{d+1}.
pub fn twisted_homology_of(
    twisted: &TwistedChainComplex,
    degree: usize,
) -> ModuleDecomposition {
    if degree > twisted.dimension() {
        return ModuleDecomposition::free(0);
    }
    let bd = twisted.boundary(degree);
    let bd_up = twisted.boundary(degree + 1);
    let snf = smith_normal_form(&bd);
    let rank = snf.rank();
    let kernel_dim = bd.cols() - rank;

    // Express each boundary of a (d+1)-cell in the V-basis; rows below
    // the rank are exactly the kernel coordinates.
    let y = snf.v_inv.mul(&bd_up);
    for r in 0..rank {
        for c in 0..y.cols() {
            debug_assert!(y.get(r, c).is_zero(), "∂∂ ≠ 0 in twisted complex");
        }
    }
    // Presentation: columns = kernel generators, rows = relations.
    let presentation = LaurentMatrix::from_fn(y.cols(), kernel_dim, |rel, gen| {
        y.get(rank + gen, rel).clone()
    });
    module_decompose(&presentation)
}

pub fn twisted_homology(
    x: &CellComplex,
    xi: &IntegerCocycle,
    degree: usize,
) -> Result<ModuleDecomposition, HomologyError> {
    let twisted = cover_complex(x, xi)?;
    Ok(twisted_homology_of(&twisted, degree))
}

/// Union of supp_of over all degrees.
pub fn supp(x: &CellComplex, xi: &IntegerCocycle) -> Result<SuppSet, HomologyError> {
    let twisted = cover_complex(x, xi)?;
    let mut out = SuppSet::empty();
    for d in 0..=twisted.dimension() {
        out.merge(supp_of(&twisted_homology_of(&twisted, d)));
    }
    Ok(out)
}

/// Torsion test: a cycle is movable to ±∞ iff its class dies in
/// H ⊗ Q(τ), i.e. it lies in the fraction-field span of im ∂_{d+1}.
pub fn movable_to_infinity(
    x: &CellComplex,
    xi: &IntegerCocycle,
    degree: usize,
    chain: &[i64],
) -> Result<bool, HomologyError> {
    let twisted = cover_complex(x, xi)?;
    let n = twisted.count(degree);
    if chain.len() != n {
        return Err(HomologyError::ChainLength {
            degree,
            expected: n,
            got: chain.len(),
        });
    }
    let z = LaurentMatrix::from_fn(n, 1, |r, _| {
        LaurentPoly::constant(BigRational::from_integer(chain[r].into()))
    });

    let bd = twisted.boundary(degree);
    if !bd.mul(&z).is_zero() {
        return Err(HomologyError::NotACycle);
    }
    if z.is_zero() {
        return Ok(true);
    }

    let bd_up = twisted.boundary(degree + 1);
    let augmented = LaurentMatrix::from_fn(n, bd_up.cols() + 1, |r, c| {
        if c < bd_up.cols() {
            bd_up.get(r, c).clone()
        } else {
            z.get(r, 0).clone()
        }
    });
    let rank_im = smith_normal_form(&bd_up).rank();
    let rank_aug = smith_normal_form(&augmented).rank();
    Ok(rank_aug == rank_im)
}

/// dim H^p(M; a^ξ): cohomology of the cover complex specialized at
/// τ = a, transposed.
pub fn local_cohomology(
    x: &CellComplex,
    xi: &IntegerCocycle,
    a: &BigRational,
    degree: usize,
) -> Result<usize, HomologyError> {
    if a.is_zero() {
        return Err(HomologyError::ZeroTwist);
    }
    let twisted = cover_complex(x, xi)?;
    if degree > twisted.dimension() {
        return Ok(0);
    }
    let n = twisted.count(degree);
    let rank_down = twisted.boundary(degree).evaluate_at(a).unwrap().rank();
    let rank_up = twisted.boundary(degree + 1).evaluate_at(a).unwrap().rank();
    Ok(n - rank_down - rank_up)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_int_terms(terms)
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn circle() -> CellComplex {
        CellComplex::new(vec![1, 1], vec![vec![vec![(0, 1), (0, -1)]]])
    }

    fn cw_torus() -> CellComplex {
        CellComplex::new(
            vec![1, 2, 1],
            vec![
                vec![vec![(0, 1), (0, -1)], vec![(0, 1), (0, -1)]],
                vec![vec![(0, 1), (1, 1), (0, -1), (1, -1)]],
            ],
        )
    }

    #[test]
    fn circle_homology() {
        let xi = IntegerCocycle::new(vec![1]);
        let h0 = twisted_homology(&circle(), &xi, 0).unwrap();
        assert_eq!(h0.free_rank, 0);
        assert_eq!(h0.torsion_factors, vec![p(&[(1, 1), (0, -1)])]);
        let h1 = twisted_homology(&circle(), &xi, 1).unwrap();
        assert!(h1.is_zero());
    }

    #[test]
    fn torus_homology_and_supp() {
        let xi = IntegerCocycle::new(vec![1, 0]);
        let x = cw_torus();
        let h0 = twisted_homology(&x, &xi, 0).unwrap();
        assert_eq!(h0.free_rank, 0);
        assert_eq!(h0.torsion_factors, vec![p(&[(1, 1), (0, -1)])]);
        let h1 = twisted_homology(&x, &xi, 1).unwrap();
        assert_eq!(h1.free_rank, 0);
        assert_eq!(h1.torsion_factors, vec![p(&[(1, 1), (0, -1)])]);
        let h2 = twisted_homology(&x, &xi, 2).unwrap();
        assert!(h2.is_zero());

        let s = supp(&x, &xi).unwrap();
        assert_eq!(s.rational_roots, vec![q(1)]);
        assert!(s.residual_factors.is_empty());
    }

    #[test]
    fn wedge_of_circles_supp_contains_one() {
        // 1 vertex, 2 loop edges, ξ = (1, 0): the second circle survives
        // as (τ−1)-torsion in degree 1
        let x = CellComplex::new(
            vec![1, 2],
            vec![vec![vec![(0, 1), (0, -1)], vec![(0, 1), (0, -1)]]],
        );
        let xi = IntegerCocycle::new(vec![1, 0]);
        let s = supp(&x, &xi).unwrap();
        assert!(s.contains_rational(&q(1)));
    }

    #[test]
    fn zero_cocycle_supp_empty() {
        let x = cw_torus();
        let s = supp(&x, &IntegerCocycle::zero(2)).unwrap();
        assert!(s.is_empty());
        for d in 0..=2 {
            let h = twisted_homology(&x, &IntegerCocycle::zero(2), d).unwrap();
            assert!(h.torsion_factors.is_empty());
        }
    }

    #[test]
    fn movable_vertex_class_on_circle() {
        let xi = IntegerCocycle::new(vec![1]);
        assert!(movable_to_infinity(&circle(), &xi, 0, &[1]).unwrap());
    }

    #[test]
    fn movable_b_circle_on_torus() {
        let xi = IntegerCocycle::new(vec![1, 0]);
        // the b-circle (second edge) is a twisted cycle: ∂̃b = 0
        assert!(movable_to_infinity(&cw_torus(), &xi, 1, &[0, 1]).unwrap());
    }

    #[test]
    fn zero_chain_is_movable() {
        let xi = IntegerCocycle::new(vec![1, 0]);
        assert!(movable_to_infinity(&cw_torus(), &xi, 1, &[0, 0]).unwrap());
    }

    #[test]
    fn non_cycle_rejected() {
        // the a-circle is not a twisted cycle: ∂̃a = (τ−1)·v ≠ 0
        let xi = IntegerCocycle::new(vec![1, 0]);
        assert!(matches!(
            movable_to_infinity(&cw_torus(), &xi, 1, &[1, 0]),
            Err(HomologyError::NotACycle)
        ));
    }

    #[test]
    fn local_cohomology_circle() {
        let xi = IntegerCocycle::new(vec![1]);
        assert_eq!(local_cohomology(&circle(), &xi, &q(2), 0).unwrap(), 0);
        assert_eq!(local_cohomology(&circle(), &xi, &q(1), 0).unwrap(), 1);
        assert_eq!(local_cohomology(&circle(), &xi, &q(1), 1).unwrap(), 1);
        assert!(local_cohomology(&circle(), &xi, &BigRational::zero(), 0).is_err());
    }

    #[test]
    fn euler_characteristic_twist_independent() {
        let x = cw_torus();
        let xi = IntegerCocycle::new(vec![1, 0]);
        for a in [q(1), q(2), q(-1), BigRational::new(1.into(), 2.into())] {
            let chi: i64 = (0..=2)
                .map(|p| {
                    let dim = local_cohomology(&x, &xi, &a, p).unwrap() as i64;
                    if p % 2 == 0 {
                        dim
                    } else {
                        -dim
                    }
                })
                .sum();
            assert_eq!(chi, 0, "Euler characteristic of T² at twist {a}");
        }
    }
}
