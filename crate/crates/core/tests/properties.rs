//! Cross-module invariants: gauge independence of the covering chain
//! complex, subdivision invariance of Supp, twist independence of the
//! Euler characteristic, and soundness of detected heteroclinic edges
//! under tighter integration.

use novflow_core::complex::model::{
    cw_circle, cw_torus, simplicial_circle, simplicial_torus,
};
use novflow_core::complex::{
    cover_complex_with_edge_order, supp, twisted_homology, twisted_homology_of,
};
use novflow_core::flow::{
    detect_heteroclinics, find_zeros, lyapunov_box, BoxOptions, DetectOptions, Scenario,
};
use num::{BigRational, One};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn homology_is_gauge_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (x, xi) in [cw_circle(), cw_torus(), simplicial_circle(), simplicial_torus()] {
        let reference: Vec<_> = (0..=x.dimension())
            .map(|d| twisted_homology(&x, &xi, d).unwrap())
            .collect();
        for _ in 0..10 {
            let mut order: Vec<usize> = (0..x.count(1)).collect();
            order.shuffle(&mut rng);
            let twisted = cover_complex_with_edge_order(&x, &xi, &order).unwrap();
            for d in 0..=x.dimension() {
                assert_eq!(
                    twisted_homology_of(&twisted, d),
                    reference[d],
                    "gauge changed homology in degree {d}"
                );
            }
        }
    }
}

#[test]
fn supp_is_subdivision_invariant() {
    let one = vec![BigRational::one()];
    for (x, xi) in [cw_circle(), simplicial_circle()] {
        let s = supp(&x, &xi).unwrap();
        assert_eq!(s.rational_roots, one);
        assert!(s.residual_factors.is_empty());
    }
    for (x, xi) in [cw_torus(), simplicial_torus()] {
        let s = supp(&x, &xi).unwrap();
        assert_eq!(s.rational_roots, one);
        assert!(s.residual_factors.is_empty());
    }
}

#[test]
fn euler_characteristic_ignores_the_twist() {
    // twisted Betti alternating sum equals the cellular Euler number
    for (x, xi) in [cw_circle(), cw_torus(), simplicial_circle(), simplicial_torus()] {
        let chi_cells: i64 = (0..=x.dimension())
            .map(|d| {
                let c = x.count(d) as i64;
                if d % 2 == 0 { c } else { -c }
            })
            .sum();
        let chi_twisted: i64 = (0..=x.dimension())
            .map(|d| {
                let h = twisted_homology(&x, &xi, d).unwrap();
                let r = h.free_rank as i64;
                if d % 2 == 0 { r } else { -r }
            })
            .sum();
        assert_eq!(chi_twisted, chi_cells);
    }
}

#[test]
fn detected_edges_survive_tighter_integration() {
    for name in ["t1-homoclinic", "t2-two-zero"] {
        let s = Scenario::builtin(name).unwrap();
        let zeros = find_zeros(&s, 32, 1e-9, 1e-3).unwrap().zeros;
        let boxes: Vec<_> = (0..zeros.len())
            .map(|i| lyapunov_box(&s, &zeros, i, &BoxOptions::default()).unwrap())
            .collect();
        let loose = DetectOptions::for_scenario(&s);
        let tight = DetectOptions {
            tol_abs: loose.tol_abs / 10.0,
            tol_rel: loose.tol_rel / 10.0,
            ..loose
        };
        let a = detect_heteroclinics(&s, &zeros, &boxes, &loose).unwrap();
        let b = detect_heteroclinics(&s, &zeros, &boxes, &tight).unwrap();
        let pairs = |r: &novflow_core::flow::DetectionReport| {
            let mut p: Vec<(usize, usize)> =
                r.edges.iter().map(|e| (e.source, e.target)).collect();
            p.sort_unstable();
            p
        };
        assert_eq!(pairs(&a), pairs(&b), "{name}: edges changed under tighter tolerance");
    }
}
