//! Dense matrices over Λ = ℚ[τ,τ⁻¹].

use super::poly::LaurentPoly;
use crate::linalg::RationalMatrix;
use num::rational::BigRational;
use num::Zero;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LaurentError {
    #[error("evaluation point must be nonzero (τ acts invertibly)")]
    ZeroEvaluationPoint,
}

/// A rows×cols matrix with Laurent polynomial entries, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<LaurentPoly>,
}

impl LaurentMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![LaurentPoly::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, LaurentPoly::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> LaurentPoly) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        Self { rows, cols, entries }
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<LaurentPoly>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows×cols");
        Self { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &LaurentPoly {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: LaurentPoly) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn mul(&self, rhs: &LaurentMatrix) -> LaurentMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        LaurentMatrix::from_fn(self.rows, rhs.cols, |r, c| {
            let mut acc = LaurentPoly::zero();
            for k in 0..self.cols {
                acc = &acc + &(self.get(r, k) * rhs.get(k, c));
            }
            acc
        })
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.entries.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[target] += λ · row[source]
    pub fn add_scaled_row(&mut self, target: usize, source: usize, lambda: &LaurentPoly) {
        for c in 0..self.cols {
            let v = self.get(target, c) + &(self.get(source, c) * lambda);
            self.set(target, c, v);
        }
    }

    /// col[target] += λ · col[source]
    pub fn add_scaled_col(&mut self, target: usize, source: usize, lambda: &LaurentPoly) {
        for r in 0..self.rows {
            let v = self.get(r, target) + &(self.get(r, source) * lambda);
            self.set(r, target, v);
        }
    }

    pub fn scale_row(&mut self, r: usize, unit: &LaurentPoly) {
        for c in 0..self.cols {
            self.set(r, c, self.get(r, c) * unit);
        }
    }

    pub fn scale_col(&mut self, c: usize, unit: &LaurentPoly) {
        for r in 0..self.rows {
            self.set(r, c, self.get(r, c) * unit);
        }
    }

    /// Laplace-expansion determinant. Intended for the small unimodular
    /// factors that come out of Smith reduction, not for bulk work.
    pub fn determinant(&self) -> LaurentPoly {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        match n {
            0 => LaurentPoly::one(),
            1 => self.get(0, 0).clone(),
            _ => {
                let mut acc = LaurentPoly::zero();
                for c in 0..n {
                    let e = self.get(0, c);
                    if e.is_zero() {
                        continue;
                    }
                    let minor = LaurentMatrix::from_fn(n - 1, n - 1, |r2, c2| {
                        self.get(r2 + 1, if c2 < c { c2 } else { c2 + 1 }).clone()
                    });
                    let term = &minor.determinant() * e;
                    acc = if c % 2 == 0 { &acc + &term } else { &acc - &term };
                }
                acc
            }
        }
    }

    /// Entry-wise specialization τ → a over exact rationals. Rejects a = 0.
    pub fn evaluate_at(&self, a: &BigRational) -> Result<RationalMatrix, LaurentError> {
        if a.is_zero() {
            return Err(LaurentError::ZeroEvaluationPoint);
        }
        Ok(RationalMatrix::from_fn(self.rows, self.cols, |r, c| {
            self.get(r, c).eval(a)
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::One;

    #[test]
    fn evaluate_rejects_zero() {
        let m = LaurentMatrix::identity(1);
        assert!(m.evaluate_at(&BigRational::zero()).is_err());
    }

    #[test]
    fn evaluate_entrywise() {
        let mut m = LaurentMatrix::zeros(1, 1);
        m.set(0, 0, LaurentPoly::from_int_terms(&[(1, 1), (0, -1)]));
        let v = m.evaluate_at(&BigRational::one()).unwrap();
        assert!(v.get(0, 0).is_zero());

        let mut m = LaurentMatrix::zeros(1, 1);
        m.set(0, 0, LaurentPoly::from_int_terms(&[(-1, 1)]));
        let two = BigRational::from_integer(2.into());
        let v = m.evaluate_at(&two).unwrap();
        assert_eq!(*v.get(0, 0), BigRational::new(1.into(), 2.into()));
    }
}
