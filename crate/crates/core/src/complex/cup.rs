//! Twisted cup products and the cup-length lower bound for cat(M,ξ).
//!
//! Products use the Alexander–Whitney front/back-face rule on ordered
//! simplices. The back face of σ = [v₀,…,v_{p+q}] sits at holonomy
//! level h(v₀v_p) inside the chosen lift of σ, so its value picks up
//! the transport factor twist^h — this is exactly what makes the
//! product of an a^ξ- and a b^ξ-cocycle an (ab)^ξ-cocycle.

use super::cell::{CellComplex, ComplexError, IntegerCocycle};
use super::cover::{cover_complex, TwistedChainComplex};
use super::homology::{supp, HomologyError};
use crate::laurent::poly::rational_pow;
use crate::linalg::RationalMatrix;
use num::rational::BigRational;
use num::{One, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CupError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error("cup product requires a simplicial complex")]
    NotSimplicial,
    #[error("cochain is not a cocycle for its twist")]
    NotACocycle,
    #[error("cochain has {got} values but degree {degree} has {expected} simplices")]
    Length { degree: usize, expected: usize, got: usize },
    #[error("twist parameter must be nonzero")]
    ZeroTwist,
}

/// A rational cochain on p-simplices, twisted by the local system a^ξ.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistedCochain {
    pub degree: usize,
    pub twist: BigRational,
    pub values: Vec<BigRational>,
}

impl TwistedCochain {
    pub fn zero(degree: usize, twist: BigRational, len: usize) -> Self {
        Self {
            degree,
            twist,
            values: vec![BigRational::zero(); len],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }
}

/// Cochain-level context for one (complex, cocycle) pair.
pub struct CupRing<'a> {
    x: &'a CellComplex,
    twisted: TwistedChainComplex,
    /// sorted vertex list → simplex index, per dimension
    lookup: Vec<BTreeMap<Vec<usize>, usize>>,
    edge_lookup: BTreeMap<(usize, usize), usize>,
}

impl<'a> CupRing<'a> {
    pub fn new(x: &'a CellComplex, xi: &IntegerCocycle) -> Result<Self, CupError> {
        let simps = x.simplices().ok_or(CupError::NotSimplicial)?;
        let twisted = cover_complex(x, xi)?;
        let lookup = simps
            .iter()
            .map(|dim| {
                dim.iter()
                    .enumerate()
                    .map(|(i, s)| (s.clone(), i))
                    .collect()
            })
            .collect();
        let edge_lookup = simps[1]
            .iter()
            .enumerate()
            .map(|(i, e)| ((e[0], e[1]), i))
            .collect();
        Ok(Self {
            x,
            twisted,
            lookup,
            edge_lookup,
        })
    }

    pub fn dimension(&self) -> usize {
        self.x.dimension()
    }

    fn check_len(&self, u: &TwistedCochain) -> Result<(), CupError> {
        let expected = self.x.count(u.degree);
        if u.values.len() != expected {
            return Err(CupError::Length {
                degree: u.degree,
                expected,
                got: u.values.len(),
            });
        }
        if u.twist.is_zero() {
            return Err(CupError::ZeroTwist);
        }
        Ok(())
    }

    /// δ : C^p(a^ξ) → C^{p+1}(a^ξ), the transpose of the twisted
    /// boundary specialized at τ = a.
    fn delta_matrix(&self, p: usize, a: &BigRational) -> RationalMatrix {
        let b = self.twisted.boundary(p + 1).evaluate_at(a).unwrap();
        RationalMatrix::from_fn(b.cols(), b.rows(), |r, c| b.get(c, r).clone())
    }

    pub fn coboundary(&self, u: &TwistedCochain) -> Result<TwistedCochain, CupError> {
        self.check_len(u)?;
        let m = self.delta_matrix(u.degree, &u.twist);
        let mut values = vec![BigRational::zero(); m.rows()];
        for (r, out) in values.iter_mut().enumerate() {
            for c in 0..m.cols() {
                *out += m.get(r, c) * &u.values[c];
            }
        }
        Ok(TwistedCochain {
            degree: u.degree + 1,
            twist: u.twist.clone(),
            values,
        })
    }

    pub fn is_cocycle(&self, u: &TwistedCochain) -> Result<bool, CupError> {
        Ok(self.coboundary(u)?.is_zero())
    }

    /// Alexander–Whitney product with the holonomy transport on the
    /// back face. Both inputs must be cocycles.
    pub fn cup(&self, u: &TwistedCochain, v: &TwistedCochain) -> Result<TwistedCochain, CupError> {
        if !self.is_cocycle(u)? || !self.is_cocycle(v)? {
            return Err(CupError::NotACocycle);
        }
        Ok(self.cup_cochain(u, v))
    }

    /// The raw cochain-level product (no cocycle requirement); used by
    /// tests for the Leibniz identity.
    pub fn cup_cochain(&self, u: &TwistedCochain, v: &TwistedCochain) -> TwistedCochain {
        let (p, q) = (u.degree, v.degree);
        let twist = &u.twist * &v.twist;
        let n = p + q;
        let count = self.x.count(n);
        let mut values = vec![BigRational::zero(); count];
        if count == 0 {
            return TwistedCochain { degree: n, twist, values };
        }
        let simps = self.x.simplices().unwrap();
        for (idx, verts) in simps[n].iter().enumerate() {
            let front: Vec<usize> = verts[..=p].to_vec();
            let back: Vec<usize> = verts[p..].to_vec();
            let fi = self.lookup[p][&front];
            let bi = self.lookup[q][&back];
            let w = if p == 0 {
                0
            } else {
                let e = self.edge_lookup[&(verts[0], verts[p])];
                self.twisted.edge_holonomy[e]
            };
            values[idx] = &u.values[fi] * &v.values[bi] * rational_pow(&v.twist, w);
        }
        TwistedCochain { degree: n, twist, values }
    }

    /// Whether the class of a cocycle vanishes in H^p(M; a^ξ).
    pub fn class_is_zero(&self, u: &TwistedCochain) -> Result<bool, CupError> {
        if !self.is_cocycle(u)? {
            return Err(CupError::NotACocycle);
        }
        if u.degree == 0 {
            return Ok(u.is_zero());
        }
        let image = self.delta_matrix(u.degree - 1, &u.twist);
        Ok(image.contains_in_column_span(&u.values))
    }

    /// Cocycle representatives of a basis of H^p(M; a^ξ).
    pub fn cohomology_basis(&self, a: &BigRational, p: usize) -> Vec<TwistedCochain> {
        if p > self.dimension() {
            return Vec::new();
        }
        let n = self.x.count(p);
        let kernel = self.delta_matrix(p, a).kernel_basis();
        if kernel.is_empty() {
            return Vec::new();
        }
        let image = if p == 0 {
            RationalMatrix::zeros(n, 0)
        } else {
            self.delta_matrix(p - 1, a)
        };
        // Kernel vectors whose columns add pivots beyond the image span
        // represent a basis of the quotient.
        let mut stacked = image.hstack(&RationalMatrix::from_columns(n, &kernel));
        let pivots = stacked.rref();
        kernel
            .iter()
            .enumerate()
            .filter(|(i, _)| pivots.contains(&(image.cols() + i)))
            .map(|(_, vec)| TwistedCochain {
                degree: p,
                twist: a.clone(),
                values: vec.clone(),
            })
            .collect()
    }
}

/// Certified cup-product lower bound on cat(M,ξ).
///
/// For ξ = 0 this is the classical cup length plus one. For ξ ≠ 0 a
/// nonzero product u∪v∪w₁∪⋯∪w_r with u, v twisted off Supp and the w_j
/// untwisted (all positive degree) certifies cat(M,ξ) > r, and the
/// returned bound is the number of factors minus one; 0 when no valid
/// product exists.
pub fn cat_cup_lower_bound(x: &CellComplex, xi: &IntegerCocycle) -> Result<usize, CupError> {
    let ring = CupRing::new(x, xi)?;
    let dim = ring.dimension();
    let one = BigRational::one();

    let untwisted: Vec<Vec<TwistedCochain>> = (1..=dim)
        .map(|p| ring.cohomology_basis(&one, p))
        .collect();

    if xi.is_zero() {
        let mut best = 0usize;
        for p in 1..=dim {
            for u in &untwisted[p - 1] {
                best = best.max(1 + extend_untwisted(&ring, u, &untwisted)?);
            }
        }
        return Ok(best + 1);
    }

    let supp_set = supp(x, xi)?;
    let scan: Vec<BigRational> = [
        BigRational::from_integer(2.into()),
        BigRational::from_integer(3.into()),
        BigRational::new(1.into(), 2.into()),
        BigRational::from_integer((-1).into()),
        BigRational::from_integer((-2).into()),
    ]
    .into_iter()
    .filter(|a| !supp_set.contains_rational(a))
    .collect();

    let mut bases: BTreeMap<(BigRational, usize), Vec<TwistedCochain>> = BTreeMap::new();
    for a in &scan {
        for p in 1..=dim {
            bases.insert((a.clone(), p), ring.cohomology_basis(a, p));
        }
    }

    let mut best = 0usize;
    for a in &scan {
        for b in &scan {
            for p in 1..dim {
                for q in 1..=(dim - p) {
                    for u in &bases[&(a.clone(), p)] {
                        for v in &bases[&(b.clone(), q)] {
                            let w = ring.cup(u, v)?;
                            if ring.class_is_zero(&w)? {
                                continue;
                            }
                            let factors = 2 + extend_untwisted(&ring, &w, &untwisted)?;
                            best = best.max(factors - 1);
                        }
                    }
                }
            }
        }
    }
    Ok(best)
}

/// Longest chain of further untwisted positive-degree factors keeping
/// the product nonzero in cohomology.
fn extend_untwisted(
    ring: &CupRing,
    current: &TwistedCochain,
    untwisted: &[Vec<TwistedCochain>],
) -> Result<usize, CupError> {
    let dim = ring.dimension();
    let mut best = 0usize;
    for pj in 1..=(dim.saturating_sub(current.degree)) {
        for w in &untwisted[pj - 1] {
            let next = ring.cup(current, w)?;
            if !ring.class_is_zero(&next)? {
                best = best.max(1 + extend_untwisted(ring, &next, untwisted)?);
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::model::{simplicial_circle, simplicial_sphere, simplicial_torus};
    use rand::{Rng, SeedableRng};

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn random_cochain(
        ring: &CupRing,
        degree: usize,
        twist: BigRational,
        rng: &mut impl Rng,
    ) -> TwistedCochain {
        let n = ring.x.count(degree);
        TwistedCochain {
            degree,
            twist,
            values: (0..n).map(|_| q(rng.gen_range(-3..=3))).collect(),
        }
    }

    #[test]
    fn leibniz_rule_on_torus() {
        // δ(u∪v) = δu∪v + (−1)^p u∪δv for arbitrary cochains — the
        // strongest consistency check of the transport weight.
        let (x, xi) = simplicial_torus();
        let ring = CupRing::new(&x, &xi).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for (p, qdeg) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let a = q(2);
            let b = BigRational::new(1.into(), 2.into());
            let u = random_cochain(&ring, p, a, &mut rng);
            let v = random_cochain(&ring, qdeg, b, &mut rng);
            let lhs = ring.coboundary(&ring.cup_cochain(&u, &v)).unwrap();
            let du_v = ring.cup_cochain(&ring.coboundary(&u).unwrap(), &v);
            let u_dv = ring.cup_cochain(&u, &ring.coboundary(&v).unwrap());
            let sign = if p % 2 == 0 { q(1) } else { q(-1) };
            for i in 0..lhs.values.len() {
                let rhs = &du_v.values[i] + &(&u_dv.values[i] * &sign);
                assert_eq!(lhs.values[i], rhs, "Leibniz fails at p={p}, q={qdeg}");
            }
        }
    }

    #[test]
    fn cup_with_zero_is_zero() {
        let (x, _) = simplicial_torus();
        let xi = IntegerCocycle::zero(x.count(1));
        let ring = CupRing::new(&x, &xi).unwrap();
        let basis = ring.cohomology_basis(&q(1), 1);
        let z = TwistedCochain::zero(1, q(1), x.count(1));
        let out = ring.cup(&basis[0], &z).unwrap();
        assert!(out.is_zero());
    }

    #[test]
    fn unit_cochain_acts_as_identity_up_to_coboundary() {
        let (x, _) = simplicial_torus();
        let xi = IntegerCocycle::zero(x.count(1));
        let ring = CupRing::new(&x, &xi).unwrap();
        let ones = TwistedCochain {
            degree: 0,
            twist: q(1),
            values: vec![q(1); x.count(0)],
        };
        for u in ring.cohomology_basis(&q(1), 1) {
            let prod = ring.cup(&ones, &u).unwrap();
            let mut diff = prod.clone();
            for i in 0..diff.values.len() {
                diff.values[i] = &prod.values[i] - &u.values[i];
            }
            assert!(ring.class_is_zero(&diff).unwrap());
        }
    }

    #[test]
    fn torus_generators_pair_to_fundamental_class() {
        let (x, _) = simplicial_torus();
        let xi = IntegerCocycle::zero(x.count(1));
        let ring = CupRing::new(&x, &xi).unwrap();
        let h1 = ring.cohomology_basis(&q(1), 1);
        assert_eq!(h1.len(), 2);
        let prod = ring.cup(&h1[0], &h1[1]).unwrap();
        assert!(!ring.class_is_zero(&prod).unwrap());
    }

    #[test]
    fn torus_classical_bound_is_three() {
        let (x, _) = simplicial_torus();
        let xi = IntegerCocycle::zero(x.count(1));
        assert_eq!(cat_cup_lower_bound(&x, &xi).unwrap(), 3);
    }

    #[test]
    fn sphere_classical_bound_is_two() {
        let x = simplicial_sphere();
        let xi = IntegerCocycle::zero(x.count(1));
        assert_eq!(cat_cup_lower_bound(&x, &xi).unwrap(), 2);
    }

    #[test]
    fn circle_with_nonzero_cocycle_bound_zero() {
        let (x, xi) = simplicial_circle();
        assert_eq!(cat_cup_lower_bound(&x, &xi).unwrap(), 0);
    }
}
