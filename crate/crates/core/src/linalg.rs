//! Exact Gaussian elimination over the rationals.
//!
//! Shared by the twisted-cohomology and cup-product pipelines, and used
//! as the numeric-rank cross-check oracle for Smith reduction.

use num::rational::BigRational;
use num::Zero;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigRational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigRational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<BigRational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    /// Horizontal concatenation [self | rhs].
    pub fn hstack(&self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.rows, rhs.rows);
        RationalMatrix::from_fn(self.rows, self.cols + rhs.cols, |r, c| {
            if c < self.cols {
                self.get(r, c).clone()
            } else {
                rhs.get(r, c - self.cols).clone()
            }
        })
    }

    pub fn from_columns(rows: usize, cols: &[Vec<BigRational>]) -> RationalMatrix {
        RationalMatrix::from_fn(rows, cols.len(), |r, c| cols[c][r].clone())
    }

    /// Reduced row echelon form; returns pivot column indices.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(row, p);
            let inv = self.get(row, col).recip();
            for c in col..self.cols {
                let v = self.get(row, c) * &inv;
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r != row && !self.get(r, col).is_zero() {
                    let f = self.get(r, col).clone();
                    for c in col..self.cols {
                        let v = self.get(r, c) - &(self.get(row, c) * &f);
                        self.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right kernel, as column vectors.
    pub fn kernel_basis(&self) -> Vec<Vec<BigRational>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![BigRational::zero(); self.cols];
            v[free] = BigRational::from_integer(1.into());
            for (prow, &pcol) in pivots.iter().enumerate() {
                v[pcol] = -m.get(prow, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Whether `v` lies in the column span.
    pub fn contains_in_column_span(&self, v: &[BigRational]) -> bool {
        assert_eq!(v.len(), self.rows);
        let aug = self.hstack(&RationalMatrix::from_fn(self.rows, 1, |r, _| v[r].clone()));
        aug.rank() == self.rank()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::One;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn rank_and_kernel() {
        // [[1,2,3],[2,4,6]] has rank 1 and a 2-dimensional kernel
        let m = RationalMatrix::from_fn(2, 3, |r, c| q(((r + 1) * (c + 1)) as i64));
        assert_eq!(m.rank(), 1);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 2);
        for v in &k {
            for r in 0..2 {
                let mut acc = BigRational::zero();
                for c in 0..3 {
                    acc += m.get(r, c) * &v[c];
                }
                assert!(acc.is_zero());
            }
        }
    }

    #[test]
    fn span_membership() {
        let m = RationalMatrix::from_fn(2, 1, |r, _| if r == 0 { q(1) } else { q(2) });
        assert!(m.contains_in_column_span(&[q(2), q(4)]));
        assert!(!m.contains_in_column_span(&[BigRational::one(), BigRational::zero()]));
    }
}
