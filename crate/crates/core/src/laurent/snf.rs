//! Smith normal form over Λ = ℚ[τ,τ⁻¹].
//!
//! Λ is a Euclidean domain with size function span (degree after the
//! unit τ^m is stripped), so diagonalization proceeds by repeated
//! division with remainder. Pivots are chosen with minimal span, ties
//! broken by smallest coefficient height, which keeps intermediate
//! entries small at the matrix sizes this crate deals with.

use super::matrix::LaurentMatrix;
use super::poly::LaurentPoly;

/// U·M·V = D with U, V invertible over Λ and D diagonal, dᵢ | dᵢ₊₁,
/// each dᵢ normalized (lowest exponent 0, leading coefficient 1).
pub struct SmithNormalForm {
    pub u: LaurentMatrix,
    pub d: LaurentMatrix,
    pub v: LaurentMatrix,
    pub u_inv: LaurentMatrix,
    pub v_inv: LaurentMatrix,
}

impl SmithNormalForm {
    /// Number of nonzero diagonal entries; the rank of M over Q(τ).
    pub fn rank(&self) -> usize {
        let n = self.d.rows().min(self.d.cols());
        (0..n).filter(|&i| !self.d.get(i, i).is_zero()).count()
    }

    /// Nonzero diagonal entries (already normalized), in order.
    pub fn invariant_factors(&self) -> Vec<LaurentPoly> {
        let n = self.d.rows().min(self.d.cols());
        (0..n)
            .map(|i| self.d.get(i, i).clone())
            .filter(|p| !p.is_zero())
            .collect()
    }
}

struct Reduction {
    d: LaurentMatrix,
    u: LaurentMatrix,
    u_inv: LaurentMatrix,
    v: LaurentMatrix,
    v_inv: LaurentMatrix,
}

impl Reduction {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    /// row[target] += λ·row[source]
    fn add_row(&mut self, target: usize, source: usize, lambda: &LaurentPoly) {
        self.d.add_scaled_row(target, source, lambda);
        self.u.add_scaled_row(target, source, lambda);
        // (R⁻¹ adds −λ·col[target] to col[source] on the right)
        let neg = -lambda;
        self.u_inv.add_scaled_col(source, target, &neg);
    }

    /// col[target] += λ·col[source]
    fn add_col(&mut self, target: usize, source: usize, lambda: &LaurentPoly) {
        self.d.add_scaled_col(target, source, lambda);
        self.v.add_scaled_col(target, source, lambda);
        let neg = -lambda;
        self.v_inv.add_scaled_row(source, target, &neg);
    }

    fn scale_row(&mut self, r: usize, unit: &LaurentPoly) {
        self.d.scale_row(r, unit);
        self.u.scale_row(r, unit);
        self.u_inv.scale_col(r, &unit.unit_inverse());
    }
}

/// Pivot choice: nonzero entry in the trailing block with minimal span,
/// ties by smallest coefficient height.
fn choose_pivot(d: &LaurentMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for r in t..d.rows() {
        for c in t..d.cols() {
            let e = d.get(r, c);
            if e.is_zero() {
                continue;
            }
            match best {
                None => best = Some((r, c)),
                Some((br, bc)) => {
                    let b = d.get(br, bc);
                    let better = e.span() < b.span()
                        || (e.span() == b.span() && e.height() < b.height());
                    if better {
                        best = Some((r, c));
                    }
                }
            }
        }
    }
    best
}

pub fn smith_normal_form(m: &LaurentMatrix) -> SmithNormalForm {
    let rows = m.rows();
    let cols = m.cols();
    let mut red = Reduction {
        d: m.clone(),
        u: LaurentMatrix::identity(rows),
        u_inv: LaurentMatrix::identity(rows),
        v: LaurentMatrix::identity(cols),
        v_inv: LaurentMatrix::identity(cols),
    };

    let n = rows.min(cols);
    let mut t = 0;
    while t < n {
        let Some((pr, pc)) = choose_pivot(&red.d, t) else {
            break;
        };
        red.swap_rows(t, pr);
        red.swap_cols(t, pc);

        'pivot: loop {
            // Clear the pivot column by division; leftover remainders get a
            // smaller-span pivot swapped in and the pass restarts.
            let mut dirty = false;
            for r in t + 1..rows {
                if red.d.get(r, t).is_zero() {
                    continue;
                }
                let (q, rem) = red.d.get(r, t).div_rem(red.d.get(t, t));
                red.add_row(r, t, &(-&q));
                if !rem.is_zero() {
                    red.swap_rows(t, r);
                    dirty = true;
                }
            }
            if dirty {
                continue 'pivot;
            }
            for c in t + 1..cols {
                if red.d.get(t, c).is_zero() {
                    continue;
                }
                let (q, rem) = red.d.get(t, c).div_rem(red.d.get(t, t));
                red.add_col(c, t, &(-&q));
                if !rem.is_zero() {
                    red.swap_cols(t, c);
                    dirty = true;
                }
            }
            if dirty {
                continue 'pivot;
            }
            // Row and column are clear. Enforce that the pivot divides the
            // whole trailing block; a failing entry gets folded into the
            // pivot row and elimination continues.
            for r in t + 1..rows {
                for c in t + 1..cols {
                    if !red.d.get(t, t).divides(red.d.get(r, c)) {
                        red.add_row(t, r, &LaurentPoly::one());
                        continue 'pivot;
                    }
                }
            }
            break;
        }

        // Normalize the pivot to its canonical associate.
        let pivot = red.d.get(t, t).clone();
        let unit = {
            let lo = pivot.min_exp().unwrap();
            let lead = pivot.shifted(-lo).leading_coeff();
            LaurentPoly::monomial(-lo, lead.recip())
        };
        if !unit.is_one() {
            red.scale_row(t, &unit);
        }
        t += 1;
    }

    SmithNormalForm {
        u: red.u,
        d: red.d,
        v: red.v,
        u_inv: red.u_inv,
        v_inv: red.v_inv,
    }
}
