//! Exact Laurent polynomials over the rationals.
//!
//! Elements of Λ = ℚ[τ,τ⁻¹] are stored as sparse maps from integer
//! exponent to nonzero rational coefficient. The empty map is the zero
//! polynomial. Units of Λ are exactly the single-term elements c·τ^m.

use num::rational::BigRational;
use num::{BigInt, One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// A Laurent polynomial with exact rational coefficients.
///
/// Invariant: no stored coefficient is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, BigRational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, BigRational::one())
    }

    /// c·τ^exp; the zero polynomial if `c` is zero.
    pub fn monomial(exp: i64, c: BigRational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(exp, c);
        }
        Self { coeffs }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(0, c)
    }

    /// Builds a polynomial from (exponent, integer coefficient) pairs.
    /// Repeated exponents accumulate.
    pub fn from_int_terms(terms: &[(i64, i64)]) -> Self {
        let mut p = Self::zero();
        for &(e, c) in terms {
            p.add_term(e, BigRational::from_integer(BigInt::from(c)));
        }
        p
    }

    pub fn from_terms(terms: Vec<(i64, BigRational)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, exp: i64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(exp).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Units of Λ are the single-term polynomials c·τ^m, c ≠ 0.
    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && {
            let (e, c) = self.coeffs.iter().next().unwrap();
            *e == 0 && c.is_one()
        }
    }

    pub fn coeff(&self, exp: i64) -> BigRational {
        self.coeffs.get(&exp).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// max exponent − min exponent; 0 for the zero polynomial.
    pub fn span(&self) -> i64 {
        match (self.min_exp(), self.max_exp()) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => 0,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    /// Leading (highest-exponent) coefficient; zero for the zero polynomial.
    pub fn leading_coeff(&self) -> BigRational {
        self.max_exp().map(|e| self.coeff(e)).unwrap_or_else(BigRational::zero)
    }

    /// Sum of absolute values of numerators and denominators; a crude
    /// size measure used for pivot tie-breaking.
    pub fn height(&self) -> BigInt {
        let mut h = BigInt::zero();
        for c in self.coeffs.values() {
            h += c.numer().abs() + c.denom().abs();
        }
        h
    }

    pub fn shifted(&self, by: i64) -> Self {
        let coeffs = self.coeffs.iter().map(|(e, c)| (e + by, c.clone())).collect();
        Self { coeffs }
    }

    pub fn scaled(&self, by: &BigRational) -> Self {
        if by.is_zero() {
            return Self::zero();
        }
        let coeffs = self.coeffs.iter().map(|(e, c)| (*e, c * by)).collect();
        Self { coeffs }
    }

    /// Canonical associate: lowest exponent shifted to 0 and leading
    /// coefficient scaled to 1. The zero polynomial is its own form.
    pub fn normalized(&self) -> Self {
        match self.min_exp() {
            None => Self::zero(),
            Some(lo) => {
                let shifted = self.shifted(-lo);
                let lead = shifted.leading_coeff();
                shifted.scaled(&lead.recip())
            }
        }
    }

    /// The inverse of a unit c·τ^m, namely c⁻¹·τ^{−m}.
    ///
    /// Panics if `self` is not a unit.
    pub fn unit_inverse(&self) -> Self {
        assert!(self.is_unit(), "unit_inverse on non-unit");
        let (e, c) = self.coeffs.iter().next().unwrap();
        Self::monomial(-e, c.recip())
    }

    /// Euclidean division in Λ: returns (q, r) with self = q·d + r and
    /// either r = 0 or span(r) < span(d). Panics if `d` is zero.
    pub fn div_rem(&self, d: &LaurentPoly) -> (LaurentPoly, LaurentPoly) {
        assert!(!d.is_zero(), "division by zero in Λ");
        if self.is_zero() {
            return (Self::zero(), Self::zero());
        }
        let sa = self.min_exp().unwrap();
        let sd = d.min_exp().unwrap();
        // Shift both to ordinary polynomials with constant term ≠ 0.
        let mut rem = self.shifted(-sa);
        let dd = d.shifted(-sd);
        let d_deg = dd.max_exp().unwrap();
        let d_lead = dd.leading_coeff();
        let mut quo = LaurentPoly::zero();
        while !rem.is_zero() && rem.max_exp().unwrap() >= d_deg {
            let e = rem.max_exp().unwrap() - d_deg;
            let c = rem.leading_coeff() / &d_lead;
            let t = LaurentPoly::monomial(e, c);
            rem = &rem - &(&t * &dd);
            quo = &quo + &t;
        }
        (quo.shifted(sa - sd), rem.shifted(sa))
    }

    pub fn divides(&self, other: &LaurentPoly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_rem(self).1.is_zero()
    }

    /// Evaluates at τ = a. Requires a ≠ 0 when negative exponents occur.
    pub fn eval(&self, a: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.coeffs {
            acc += c * rational_pow(a, *e);
        }
        acc
    }

    pub fn eval_f64(&self, a: f64) -> f64 {
        self.coeffs
            .iter()
            .map(|(e, c)| to_f64(c) * a.powi(*e as i32))
            .sum()
    }
}

pub(crate) fn rational_pow(a: &BigRational, e: i64) -> BigRational {
    if e == 0 {
        return BigRational::one();
    }
    let base = if e < 0 { a.recip() } else { a.clone() };
    let mut acc = BigRational::one();
    for _ in 0..e.unsigned_abs() {
        acc *= &base;
    }
    acc
}

pub(crate) fn to_f64(r: &BigRational) -> f64 {
    let n = r.numer();
    let d = r.denom();
    // Good enough for diagnostics; exact arithmetic never goes through here.
    n.to_string().parse::<f64>().unwrap_or(f64::NAN) / d.to_string().parse::<f64>().unwrap_or(f64::NAN)
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.coeffs {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.coeffs {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &rhs.coeffs {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        let coeffs = self.coeffs.iter().map(|(e, c)| (*e, -c.clone())).collect();
        LaurentPoly { coeffs }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.coeffs.iter().rev() {
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            match e {
                0 => write!(f, "{}", a)?,
                1 if a.is_one() => write!(f, "t")?,
                1 => write!(f, "{}*t", a)?,
                _ if a.is_one() => write!(f, "t^{}", e)?,
                _ => write!(f, "{}*t^{}", a, e)?,
            }
        }
        Ok(())
    }
}
