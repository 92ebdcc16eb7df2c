//! Acceptance suite: one test per criterion, each printing a single
//! pass line (visible with `--nocapture`; failures abort the test).

use novflow_core::cat::{base_values, SpaceDescriptor};
use novflow_core::complex::model::{
    cw_circle, cw_torus, simplicial_circle, simplicial_sphere, simplicial_torus,
};
use novflow_core::complex::{cat_cup_lower_bound, supp, twisted_homology, IntegerCocycle};
use novflow_core::flow::{
    check_hypotheses, detect_heteroclinics, find_homoclinic_cycles, find_zeros, integrate_flow,
    lyapunov_box, perturb_metric, BoxOptions, DetectOptions, Direction, IntegrateOptions,
    LyapunovBox, Scenario, Termination,
};
use novflow_core::laurent::{smith_normal_form, LaurentMatrix, LaurentPoly};
use num::{BigRational, FromPrimitive, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::FRAC_PI_2;
use std::process::Command;
use std::time::Instant;

const BUILTINS: [&str; 6] = [
    "arctan",
    "t1-dtheta",
    "t1-homoclinic",
    "double-well",
    "t2-two-zero",
    "product",
];

fn pass(n: usize, what: &str) {
    println!("acceptance criterion {n}: PASS — {what}");
}

/// zeros → Lyapunov boxes → heteroclinic edges → homoclinic cycles.
fn pipeline(
    scenario: &Scenario,
    grid: usize,
    opts: &DetectOptions,
) -> (usize, Vec<(usize, usize)>, Vec<Vec<usize>>) {
    let zr = find_zeros(scenario, grid, 1e-9, 1e-3).unwrap();
    let box_opts = BoxOptions::default();
    let boxes: Vec<LyapunovBox> = (0..zr.zeros.len())
        .map(|i| lyapunov_box(scenario, &zr.zeros, i, &box_opts).unwrap())
        .collect();
    let det = detect_heteroclinics(scenario, &zr.zeros, &boxes, opts).unwrap();
    let pairs: Vec<(usize, usize)> = det.edges.iter().map(|e| (e.source, e.target)).collect();
    let cycles = find_homoclinic_cycles(&pairs)
        .iter()
        .map(|c| c.zeros.clone())
        .collect();
    (zr.zeros.len(), pairs, cycles)
}

#[test]
fn criterion_1_arctan_integral_and_escape() {
    let start = Instant::now();
    let s = Scenario::builtin("arctan").unwrap();
    let t = integrate_flow(&s, &[0.0], Direction::Forward, &IntegrateOptions::default()).unwrap();
    assert_eq!(t.termination, Termination::EscapeToInfinity);
    let mag = t.final_integral.abs();
    assert!(
        (FRAC_PI_2 - 1e-3..=FRAC_PI_2).contains(&mag),
        "integral magnitude {mag} outside [π/2 − 1e−3, π/2]"
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}, limit 5 s");
    pass(1, "arctan |∫ω| within [π/2 − 1e−3, π/2], escape detected, < 5 s");
}

#[test]
fn criterion_2_base_cat_values() {
    let dx = base_values(&SpaceDescriptor::Line { exact_dx: true }).unwrap();
    assert_eq!((dx.lo, dx.hi), (0, Some(0)));
    let zero = base_values(&SpaceDescriptor::Line { exact_dx: false }).unwrap();
    assert_eq!((zero.lo, zero.hi), (1, Some(1)));
    pass(2, "cat(R,dx) = [0,0] and cat(R,0) = [1,1]");
}

#[test]
fn criterion_3_twisted_homology_oracle() {
    let tau_minus_one = LaurentPoly::from_int_terms(&[(1, 1), (0, -1)]);
    // S¹, both cell structures
    for (x, xi) in [cw_circle(), simplicial_circle()] {
        let h0 = twisted_homology(&x, &xi, 0).unwrap();
        assert_eq!(h0.free_rank, 0);
        assert_eq!(h0.torsion_factors, vec![tau_minus_one.clone()]);
        assert!(twisted_homology(&x, &xi, 1).unwrap().is_zero());
        let s = supp(&x, &xi).unwrap();
        assert_eq!(s.rational_roots, vec![BigRational::one()]);
        assert!(s.residual_factors.is_empty());
    }
    // T², both cell structures
    for (x, xi) in [cw_torus(), simplicial_torus()] {
        for d in [0, 1] {
            let h = twisted_homology(&x, &xi, d).unwrap();
            assert_eq!(h.free_rank, 0, "H{d} must be pure torsion");
            assert!(!h.torsion_factors.is_empty());
        }
        assert!(twisted_homology(&x, &xi, 2).unwrap().is_zero());
        let s = supp(&x, &xi).unwrap();
        assert_eq!(s.rational_roots, vec![BigRational::one()]);
        assert!(s.residual_factors.is_empty());
    }
    pass(3, "S¹ and T² twisted homology match the oracle across two cell structures");
}

fn random_matrix(rng: &mut impl Rng) -> LaurentMatrix {
    let rows = rng.gen_range(1..=4);
    let cols = rng.gen_range(1..=4);
    let mut m = LaurentMatrix::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            if rng.gen_bool(0.25) {
                continue;
            }
            let lo = rng.gen_range(-2..=1);
            let span = rng.gen_range(0..=3);
            let terms: Vec<(i64, i64)> =
                (lo..=lo + span).map(|e| (e, rng.gen_range(-3..=3))).collect();
            m.set(r, c, LaurentPoly::from_int_terms(&terms));
        }
    }
    m
}

#[test]
fn criterion_4_snf_property_suite() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    let points: Vec<BigRational> = [2, 3, 5]
        .iter()
        .map(|&k| BigRational::from_i64(k).unwrap())
        .collect();
    for _ in 0..500 {
        let m = random_matrix(&mut rng);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d, "U·M·V ≠ D");
        let factors = snf.invariant_factors();
        for w in factors.windows(2) {
            assert!(w[0].divides(&w[1]), "divisibility chain broken");
        }
        assert!(snf.u.determinant().is_unit(), "det U not a unit");
        assert!(snf.v.determinant().is_unit(), "det V not a unit");
        for a in &points {
            if factors.iter().any(|f| f.eval(a).is_zero()) {
                continue; // τ = a is a root of a factor
            }
            assert_eq!(
                m.evaluate_at(a).unwrap().rank(),
                snf.rank(),
                "rank mismatch at τ = {a}"
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}, limit 60 s");
    pass(4, "500 random Smith normal forms verified exactly in < 60 s");
}

#[test]
fn criterion_5_cup_bounds() {
    let (torus, _) = simplicial_torus();
    let untwisted = IntegerCocycle::zero(torus.count(1));
    assert_eq!(cat_cup_lower_bound(&torus, &untwisted).unwrap(), 3);
    let sphere = simplicial_sphere();
    let zero = IntegerCocycle::zero(sphere.count(1));
    assert_eq!(cat_cup_lower_bound(&sphere, &zero).unwrap(), 2);
    pass(5, "cup-product bounds: torus (ξ=0) → 3, S² → 2");
}

#[test]
fn criterion_6_monotonicity_suite() {
    let opts = IntegrateOptions {
        t_max: 100.0,
        escape_tail: false,
        ..IntegrateOptions::default()
    };
    for name in BUILTINS {
        let s = Scenario::builtin(name).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..100 {
            let x0 = s.random_point(&mut rng);
            let t = integrate_flow(&s, &x0, Direction::Forward, &opts).unwrap();
            let slack = 10.0 * opts.tol_abs * (t.steps_accepted as f64).max(1.0);
            for w in t.integrals.windows(2) {
                assert!(
                    w[1] <= w[0] + slack,
                    "{name}: ∫ω increased by {} (slack {slack})",
                    w[1] - w[0]
                );
            }
            if let (Some(f1), Some(f0)) = (s.primitive(&t.final_position), s.primitive(&x0)) {
                let err = (t.final_integral - (f1 - f0)).abs();
                assert!(err < 1e-6, "{name}: exact-form mismatch {err}");
            }
        }
    }
    pass(6, "∫ω non-increasing on 100 orbits per scenario; exact forms match primitives");
}

#[test]
fn criterion_7_homoclinic_detection() {
    // T¹: exactly one homoclinic orbit
    let t1 = Scenario::builtin("t1-homoclinic").unwrap();
    let (zeros, _, cycles) = pipeline(&t1, 32, &DetectOptions::for_scenario(&t1));
    assert_eq!(zeros, 1);
    assert_eq!(cycles, vec![vec![0]], "expected exactly one homoclinic cycle");

    // product: no cycles, t-coordinate strictly decreasing on 100 orbits
    let p = Scenario::builtin("product").unwrap();
    let (_, _, p_cycles) = pipeline(&p, 16, &DetectOptions::for_scenario(&p));
    assert!(p_cycles.is_empty(), "product scenario must have no cycles");
    let opts = IntegrateOptions {
        t_max: 100.0,
        ..IntegrateOptions::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut max_increase = f64::NEG_INFINITY;
    for _ in 0..100 {
        let x0 = p.random_point(&mut rng);
        let t = integrate_flow(&p, &x0, Direction::Forward, &opts).unwrap();
        for w in t.positions.windows(2) {
            max_increase = max_increase.max(w[1][1] - w[0][1]);
        }
    }
    assert!(
        max_increase < 1e-9,
        "t-coordinate increased by {max_increase}"
    );

    // T² two-zero: default detection agrees with the refined oracle
    let t2 = Scenario::builtin("t2-two-zero").unwrap();
    let default_opts = DetectOptions::for_scenario(&t2);
    // oracle: 10× denser zero seeding, 10× tighter integrator tolerance
    let refined = DetectOptions {
        tol_abs: default_opts.tol_abs / 10.0,
        tol_rel: default_opts.tol_rel / 10.0,
        ..default_opts
    };
    let (z_a, mut edges_a, mut cyc_a) = pipeline(&t2, 24, &default_opts);
    let (z_b, mut edges_b, mut cyc_b) = pipeline(&t2, 240, &refined);
    edges_a.sort_unstable();
    edges_a.dedup();
    edges_b.sort_unstable();
    edges_b.dedup();
    cyc_a.sort_unstable();
    cyc_b.sort_unstable();
    assert_eq!(z_a, z_b);
    assert_eq!(edges_a, edges_b, "edge structure differs from refined oracle");
    assert_eq!(cyc_a, cyc_b, "cycle structure differs from refined oracle");
    pass(7, "T¹ one homoclinic orbit; product none with t decreasing; T² matches refined oracle");
}

#[test]
fn criterion_8_metric_perturbation_stability() {
    let s = Scenario::builtin("t1-homoclinic").unwrap();
    let phi = novflow_core::flow::expr::parse_expr("1.25 + 0.7*sin(2*pi*x1)").unwrap();
    let c_big = 2.0;
    let p = perturb_metric(&s, &phi, c_big).unwrap();

    let (_, _, cycles) = pipeline(&p, 32, &DetectOptions::for_scenario(&p));
    assert_eq!(cycles, vec![vec![0]], "homoclinic orbit lost under perturbation");

    let zeros = find_zeros(&s, 32, 1e-9, 1e-3).unwrap().zeros;
    let c_est = check_hypotheses(&s, &zeros, 0.1, 4096, 42)
        .unwrap()
        .inf_grad_outside;
    let zeros_p = find_zeros(&p, 32, 1e-9, 1e-3).unwrap().zeros;
    let inf_p = check_hypotheses(&p, &zeros_p, 0.1, 4096, 42)
        .unwrap()
        .inf_grad_outside;
    assert!(
        inf_p >= c_est / c_big - 1e-6,
        "inf |grad| dropped below c/C: {inf_p} < {}",
        c_est / c_big
    );
    pass(8, "conformal perturbation keeps the orbit and inf|grad| ≥ c/C − 1e−6");
}

#[test]
fn criterion_9_determinism_across_threads() {
    let bin = env!("CARGO_BIN_EXE_novflow");
    let run = |threads: &str| {
        let out = Command::new(bin)
            .args(["cycles", "t2-two-zero", "--threads", threads])
            .output()
            .expect("spawn novflow");
        assert!(out.status.success(), "cycles run failed: {out:?}");
        out.stdout
    };
    let one_a = run("1");
    let one_b = run("1");
    let eight = run("8");
    assert_eq!(one_a, one_b, "repeated run not byte-identical");
    assert_eq!(one_a, eight, "thread count changed the report bytes");
    pass(9, "`cycles` reports byte-identical across runs and threads ∈ {1, 8}");
}
