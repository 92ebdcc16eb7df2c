//! Shared helpers for the criterion benchmarks.

use novflow_core::laurent::{LaurentMatrix, LaurentPoly};
use rand::Rng;

/// Random Laurent matrix with entries of span ≤ `max_span` and small
/// integer coefficients (the acceptance-suite distribution).
pub fn random_laurent_matrix<R: Rng>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    max_span: i64,
) -> LaurentMatrix {
    let mut m = LaurentMatrix::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            if rng.gen_bool(0.25) {
                continue; // keep some zero entries
            }
            let lo = rng.gen_range(-2..=1);
            let span = rng.gen_range(0..=max_span);
            let terms: Vec<(i64, i64)> = (lo..=lo + span)
                .map(|e| (e, rng.gen_range(-3..=3)))
                .collect();
            m.set(r, c, LaurentPoly::from_int_terms(&terms));
        }
    }
    m
}
