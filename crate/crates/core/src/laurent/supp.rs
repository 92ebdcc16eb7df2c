//! Supp(M,[ω]): eigenvalues of τ acting on the torsion part.
//!
//! Rational roots of the invariant factors are extracted exactly via
//! the rational-root theorem; whatever is left stays as residual
//! factors, reported together with floating approximations of their
//! roots (target precision 1e-10).

use super::decompose::ModuleDecomposition;
use super::poly::{to_f64, LaurentPoly};
use num::rational::BigRational;
use num::{BigInt, One, Signed, ToPrimitive, Zero};
use serde::Serialize;

/// Residual root-finding only enumerates divisors of integers up to
/// this bound; anything larger stays a residual factor.
const DIVISOR_BOUND: i128 = 1_000_000_000_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuppSet {
    #[serde(serialize_with = "serialize_rationals")]
    pub rational_roots: Vec<BigRational>,
    #[serde(serialize_with = "serialize_polys")]
    pub residual_factors: Vec<LaurentPoly>,
    /// (re, im) approximations of residual-factor roots.
    pub numeric_roots: Vec<(f64, f64)>,
}

fn serialize_rationals<S: serde::Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}

fn serialize_polys<S: serde::Serializer>(v: &[LaurentPoly], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|p| p.to_string()))
}

impl SuppSet {
    pub fn empty() -> Self {
        Self {
            rational_roots: Vec::new(),
            residual_factors: Vec::new(),
            numeric_roots: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.rational_roots.is_empty() && self.residual_factors.is_empty()
    }

    pub fn contains_rational(&self, a: &BigRational) -> bool {
        self.rational_roots.contains(a)
    }

    /// Union, keeping rational roots sorted and deduplicated.
    pub fn merge(&mut self, other: SuppSet) {
        for r in other.rational_roots {
            if !self.rational_roots.contains(&r) {
                self.rational_roots.push(r);
            }
        }
        self.rational_roots.sort();
        self.residual_factors.extend(other.residual_factors);
        self.numeric_roots.extend(other.numeric_roots);
    }
}

pub fn supp_of(decomp: &ModuleDecomposition) -> SuppSet {
    let mut supp = SuppSet::empty();
    for factor in &decomp.torsion_factors {
        let (roots, residual) = split_rational_roots(factor);
        for r in roots {
            if !supp.rational_roots.contains(&r) {
                supp.rational_roots.push(r);
            }
        }
        if let Some(res) = residual {
            supp.numeric_roots.extend(numeric_roots(&res));
            supp.residual_factors.push(res);
        }
    }
    supp.rational_roots.sort();
    supp
}

/// Deflates all rational roots out of a normalized factor. Returns the
/// roots (with multiplicity collapsed) and the residual cofactor, if any.
fn split_rational_roots(factor: &LaurentPoly) -> (Vec<BigRational>, Option<LaurentPoly>) {
    let mut poly = dense_coeffs(&factor.normalized());
    let mut roots = Vec::new();
    'outer: while poly.len() > 1 {
        let Some(candidates) = root_candidates(&poly) else {
            break;
        };
        for cand in candidates {
            if eval_dense(&poly, &cand).is_zero() {
                poly = deflate(&poly, &cand);
                if !roots.contains(&cand) {
                    roots.push(cand);
                }
                continue 'outer;
            }
        }
        break;
    }
    let residual = if poly.len() > 1 {
        Some(from_dense(&poly).normalized())
    } else {
        None
    };
    (roots, residual)
}

/// Dense coefficients lowest-first of a normalized factor (min exp 0).
fn dense_coeffs(p: &LaurentPoly) -> Vec<BigRational> {
    let deg = p.max_exp().unwrap_or(0);
    (0..=deg).map(|e| p.coeff(e)).collect()
}

fn from_dense(c: &[BigRational]) -> LaurentPoly {
    LaurentPoly::from_terms(c.iter().cloned().enumerate().map(|(e, v)| (e as i64, v)).collect())
}

fn eval_dense(c: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for coeff in c.iter().rev() {
        acc = acc * x + coeff;
    }
    acc
}

/// Synthetic division by (τ − r); assumes r is a root.
fn deflate(c: &[BigRational], r: &BigRational) -> Vec<BigRational> {
    let n = c.len();
    let mut out = vec![BigRational::zero(); n - 1];
    let mut carry = BigRational::zero();
    for i in (1..n).rev() {
        carry = &c[i] + &carry * r;
        out[i - 1] = carry.clone();
    }
    out
}

/// Candidate roots p/q from the rational-root theorem applied to the
/// integer-cleared polynomial. Returns None when the integers are too
/// large to factor by trial division.
fn root_candidates(c: &[BigRational]) -> Option<Vec<BigRational>> {
    let mut lcm = BigInt::one();
    for coeff in c {
        lcm = num::integer::lcm(lcm, coeff.denom().clone());
    }
    let ints: Vec<BigInt> = c.iter().map(|v| (v * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let a0 = ints.iter().find(|v| !v.is_zero())?.abs();
    let an = ints.last()?.abs();
    let a0 = a0.to_i128().filter(|v| *v <= DIVISOR_BOUND)?;
    let an = an.to_i128().filter(|v| *v <= DIVISOR_BOUND)?;
    let mut out = Vec::new();
    for p in divisors(a0) {
        for q in divisors(an) {
            let r = BigRational::new(BigInt::from(p), BigInt::from(q));
            if !out.contains(&r) {
                out.push(r.clone());
                out.push(-r);
            }
        }
    }
    Some(out)
}

fn divisors(n: i128) -> Vec<i128> {
    let n = n.abs();
    if n == 0 {
        return vec![];
    }
    let mut out = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            out.push(i);
            if i != n / i {
                out.push(n / i);
            }
        }
        i += 1;
    }
    out
}

/// Floating roots of a residual factor via companion-matrix eigenvalues,
/// refined by complex Newton iterations toward 1e-10.
fn numeric_roots(p: &LaurentPoly) -> Vec<(f64, f64)> {
    let coeffs: Vec<f64> = dense_coeffs(&p.normalized()).iter().map(to_f64).collect();
    let deg = coeffs.len() - 1;
    if deg == 0 {
        return vec![];
    }
    let mut companion = nalgebra::DMatrix::<f64>::zeros(deg, deg);
    for i in 1..deg {
        companion[(i, i - 1)] = 1.0;
    }
    for i in 0..deg {
        companion[(i, deg - 1)] = -coeffs[i];
    }
    let eigen = companion.complex_eigenvalues();
    eigen
        .iter()
        .map(|z| {
            let mut z = *z;
            for _ in 0..50 {
                let (f, df) = horner_complex(&coeffs, z);
                if df.norm() == 0.0 {
                    break;
                }
                let step = f / df;
                z -= step;
                if step.norm() < 1e-14 {
                    break;
                }
            }
            (z.re, z.im)
        })
        .collect()
}

fn horner_complex(c: &[f64], z: nalgebra::Complex<f64>) -> (nalgebra::Complex<f64>, nalgebra::Complex<f64>) {
    let mut f = nalgebra::Complex::new(0.0, 0.0);
    let mut df = nalgebra::Complex::new(0.0, 0.0);
    for &coeff in c.iter().rev() {
        df = df * z + f;
        f = f * z + coeff;
    }
    (f, df)
}
