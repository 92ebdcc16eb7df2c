//! Lyapunov boxes: compact neighborhoods of a zero that gradient
//! orbits can leave only through the floor f = −δ of the local
//! primitive. Acceptance is a sampled certificate, not a proof.

use super::integrate::{integrate_with, Direction, IntegrateOptions, Termination};
use super::scenario::{FlowError, Scenario};
use super::zeros::ZeroPoint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
pub struct LyapunovBox {
    pub zero_index: usize,
    pub center: Vec<f64>,
    pub delta: f64,
    pub epsilon: f64,
}

impl LyapunovBox {
    pub fn contains(&self, scenario: &Scenario, x: &[f64]) -> bool {
        scenario.distance(x, &self.center) <= self.epsilon
            && local_primitive(scenario, &self.center, x).abs() <= self.delta
    }
}

/// Minimal-wrap displacement from `center` to `x`.
fn displacement(scenario: &Scenario, center: &[f64], x: &[f64]) -> Vec<f64> {
    x.iter()
        .zip(center)
        .enumerate()
        .map(|(i, (&xi, &ci))| {
            let mut d = xi - ci;
            if scenario.is_periodic_axis(i) {
                d = d.rem_euclid(1.0);
                if d > 0.5 {
                    d -= 1.0;
                }
            }
            d
        })
        .collect()
}

/// Local primitive f(x) = ∫₀¹ ω(c + s·Δ)·Δ ds with f(c)=0, by
/// composite Simpson quadrature along the radial segment.
pub fn local_primitive(scenario: &Scenario, center: &[f64], x: &[f64]) -> f64 {
    let delta = displacement(scenario, center, x);
    let eval = |s: f64| -> f64 {
        let p: Vec<f64> = center.iter().zip(&delta).map(|(c, d)| c + s * d).collect();
        scenario
            .omega(&p)
            .iter()
            .zip(&delta)
            .map(|(w, d)| w * d)
            .sum()
    };
    let n = 128; // intervals (even)
    let h = 1.0 / n as f64;
    let mut acc = eval(0.0) + eval(1.0);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * eval(k as f64 * h);
    }
    acc * h / 3.0
}

pub struct BoxOptions {
    pub delta0: f64,
    pub epsilon: f64,
    pub boundary_samples_per_dim: usize,
    pub t_limit: f64,
    pub seed: u64,
    pub tol_abs: f64,
    pub tol_rel: f64,
}

impl Default for BoxOptions {
    fn default() -> Self {
        Self {
            delta0: 0.05,
            epsilon: 0.1,
            boundary_samples_per_dim: 64,
            t_limit: 200.0,
            seed: 42,
            tol_abs: 1e-9,
            tol_rel: 1e-9,
        }
    }
}

/// Builds a Lyapunov box around `zeros[index]`, halving δ (up to 20
/// times) until every sampled boundary orbit either exits through the
/// floor before drifting past 2ε, or stays in the box.
pub fn lyapunov_box(
    scenario: &Scenario,
    zeros: &[ZeroPoint],
    index: usize,
    opts: &BoxOptions,
) -> Result<LyapunovBox, FlowError> {
    let center = zeros[index].position.clone();
    let speed_sq = scenario.grad_norm_sq(&center)?;
    if speed_sq.sqrt() > 1e-6 {
        return Err(FlowError::NoZero(center));
    }
    for (j, other) in zeros.iter().enumerate() {
        if j != index && scenario.distance(&other.position, &center) <= 2.0 * opts.epsilon {
            return Err(FlowError::SampledViolation(format!(
                "zero {j} lies within 2ε of zero {index}; shrink ε"
            )));
        }
    }

    let n = scenario.dim;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let n_samples = opts.boundary_samples_per_dim * n;
    let dirs: Vec<Vec<f64>> = (0..n_samples)
        .map(|_| {
            // normalized Gaussian direction
            loop {
                let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0f64)).collect();
                let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
                if norm > 1e-3 {
                    return v.iter().map(|a| a / norm).collect();
                }
            }
        })
        .collect();

    let mut delta = opts.delta0;
    for _ in 0..=20u32 {
        if try_delta(scenario, &center, delta, opts, &dirs)? {
            return Ok(LyapunovBox {
                zero_index: index,
                center,
                delta,
                epsilon: opts.epsilon,
            });
        }
        delta /= 2.0;
    }
    Err(FlowError::NoBoxAtResolution(20))
}

fn try_delta(
    scenario: &Scenario,
    center: &[f64],
    delta: f64,
    opts: &BoxOptions,
    dirs: &[Vec<f64>],
) -> Result<bool, FlowError> {
    let eps = opts.epsilon;
    let int_opts = IntegrateOptions {
        t_max: opts.t_limit,
        tol_abs: opts.tol_abs,
        tol_rel: opts.tol_rel,
        escape_tail: false,
        ..Default::default()
    };
    for dir in dirs {
        let x0: Vec<f64> = center.iter().zip(dir).map(|(c, d)| c + eps * d).collect();
        let f0 = local_primitive(scenario, center, &x0);
        if f0.abs() > delta || f0 <= -delta {
            continue; // not on the box boundary, or already in the exit set
        }
        let traj = integrate_with(
            scenario,
            &x0,
            Direction::Forward,
            &int_opts,
            |_, x, _| {
                let d = scenario.distance(x, center);
                let f = local_primitive(scenario, center, x);
                if d > 2.0 * eps && f > -delta {
                    return Some(Termination::LeftDomain); // side exit: failure
                }
                if f <= -delta {
                    return Some(Termination::EnteredBox { zero: usize::MAX }); // floor exit marker
                }
                None
            },
        )?;
        match traj.termination {
            Termination::EnteredBox { .. } => {}
            // still inside the box at the end counts as "stays"
            Termination::ConvergedToZero | Termination::TimeExhausted
                if scenario.distance(&traj.final_position, center) <= 1.1 * eps => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use super::super::scenario::parse_scenario_json;
    use super::super::zeros::find_zeros;
    use approx::assert_relative_eq;

    #[test]
    fn primitive_matches_global_one() {
        let s = Scenario::builtin("double-well").unwrap();
        let f = |x: f64| x.powi(4) / 4.0 - x * x / 2.0;
        // primitive from the saddle at 0
        for x in [-0.4, 0.2, 0.35] {
            assert_relative_eq!(
                local_primitive(&s, &[0.0], &[x]),
                f(x),
                epsilon = 1e-8
            );
        }
    }

    #[test]
    fn bowl_box_accepted() {
        let s = parse_scenario_json(
            r#"{"model":"euclidean","dimension":2,
                "exact_part":"(x1^2 + x2^2)/2","window":[[-1.0,1.0],[-1.0,1.0]]}"#,
        )
        .unwrap();
        let zeros = find_zeros(&s, 8, 1e-9, 1e-3).unwrap().zeros;
        assert_eq!(zeros.len(), 1);
        let opts = BoxOptions {
            delta0: 0.01,
            epsilon: 0.3,
            ..Default::default()
        };
        let b = lyapunov_box(&s, &zeros, 0, &opts).unwrap();
        assert_relative_eq!(b.delta, 0.01);
    }

    #[test]
    fn saddle_box_accepted() {
        let s = parse_scenario_json(
            r#"{"model":"euclidean","dimension":2,
                "exact_part":"(x1^2 - x2^2)/2","window":[[-1.0,1.0],[-1.0,1.0]]}"#,
        )
        .unwrap();
        let zeros = find_zeros(&s, 8, 1e-9, 1e-3).unwrap().zeros;
        assert_eq!(zeros.len(), 1);
        let opts = BoxOptions {
            delta0: 0.02,
            epsilon: 0.3,
            ..Default::default()
        };
        lyapunov_box(&s, &zeros, 0, &opts).unwrap();
    }

    #[test]
    fn no_zero_is_a_precondition_violation() {
        let s = Scenario::builtin("t1-dtheta").unwrap();
        let fake = super::super::zeros::ZeroPoint {
            position: vec![0.3],
            jacobian: nalgebra::DMatrix::zeros(1, 1),
            classification: super::super::zeros::Classification::Degenerate,
            unstable_dirs: vec![],
        };
        assert!(matches!(
            lyapunov_box(&s, &[fake], 0, &BoxOptions::default()),
            Err(FlowError::NoZero(_))
        ));
    }

    #[test]
    fn degenerate_circle_zero_gets_a_box() {
        let s = Scenario::builtin("t1-homoclinic").unwrap();
        let zeros = find_zeros(&s, 32, 1e-9, 1e-3).unwrap().zeros;
        let b = lyapunov_box(&s, &zeros, 0, &BoxOptions::default()).unwrap();
        assert!(b.delta > 0.0);
        assert!(b.contains(&s, &[0.95]) || b.delta < 0.05); // wrap-aware membership
    }
}
