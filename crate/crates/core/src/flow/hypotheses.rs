//! Sampled checks of the main-theorem hypotheses: a positive lower
//! bound c on |grad ω| away from zeros, gradient boundedness (the
//! completeness heuristic), and escape-to-infinity probing.

use super::integrate::{integrate_flow, Direction, IntegrateOptions, Termination};
use super::scenario::{FlowError, Model, Scenario};
use super::zeros::ZeroPoint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct HypothesisReport {
    /// Sampled inf of |grad ω|_g outside ε-balls of the zeros — the
    /// candidate constant c. An estimate, not a certificate.
    pub inf_grad_outside: f64,
    /// Sampled sup of |grad ω|_g over the window.
    pub sup_grad: f64,
    pub samples_used: usize,
    /// Probe orbits that left every compact with bounded ∫ω.
    pub escape_orbits: usize,
    pub probe_orbits: usize,
    /// inf estimate positive and no escapes observed.
    pub positive: bool,
    pub notes: Vec<String>,
}

pub fn check_hypotheses(
    scenario: &Scenario,
    zeros: &[ZeroPoint],
    eps_excl: f64,
    sample_budget: usize,
    seed: u64,
) -> Result<HypothesisReport, FlowError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inf = f64::INFINITY;
    let mut sup: f64 = 0.0;
    let mut used = 0usize;
    for _ in 0..sample_budget {
        let x = scenario.random_point(&mut rng);
        let speed = scenario.grad_norm_sq(&x)?.sqrt();
        sup = sup.max(speed);
        if zeros
            .iter()
            .any(|z| scenario.distance(&x, &z.position) < eps_excl)
        {
            continue;
        }
        inf = inf.min(speed);
        used += 1;
    }
    if used == 0 {
        inf = 0.0;
    }

    // escape probing on a few orbits
    let probe_orbits = 8;
    let mut escape_orbits = 0;
    let opts = IntegrateOptions {
        t_max: 1e5,
        escape_tail: true,
        ..Default::default()
    };
    for _ in 0..probe_orbits {
        let x0 = scenario.random_point(&mut rng);
        let traj = integrate_flow(scenario, &x0, Direction::Forward, &opts)?;
        if traj.termination == Termination::EscapeToInfinity {
            escape_orbits += 1;
        }
    }

    let mut notes = vec![
        "all values are sampled estimates, not certificates".to_string(),
        "completeness certified only as no blow-up before t_max".to_string(),
    ];
    match scenario.model {
        Model::Euclidean => {
            if sup.is_finite() {
                notes.push(format!(
                    "sup|grad| = {sup:.6} on the window: bounded gradient suggests completeness"
                ));
            }
        }
        Model::Product { .. } => {
            notes.push("product metric on a bounded t-interval is not complete".to_string());
        }
        Model::Torus => notes.push("torus model is compact, hence complete".to_string()),
    }

    let positive = inf > 1e-6 && escape_orbits == 0 && !matches!(scenario.model, Model::Product { .. });
    Ok(HypothesisReport {
        inf_grad_outside: inf,
        sup_grad: sup,
        samples_used: used,
        escape_orbits,
        probe_orbits,
        positive,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use super::super::zeros::find_zeros;
    use approx::assert_relative_eq;

    #[test]
    fn flat_circle_constants() {
        let s = Scenario::builtin("t1-dtheta").unwrap();
        let r = check_hypotheses(&s, &[], 0.0, 500, 42).unwrap();
        assert_relative_eq!(r.inf_grad_outside, 1.0, epsilon = 1e-12);
        assert_relative_eq!(r.sup_grad, 1.0, epsilon = 1e-12);
        assert_eq!(r.escape_orbits, 0);
        assert!(r.positive);
    }

    #[test]
    fn arctan_escape_detected_and_negative() {
        let s = Scenario::builtin("arctan").unwrap();
        let r = check_hypotheses(&s, &[], 0.1, 500, 42).unwrap();
        assert!(r.escape_orbits > 0);
        assert!(!r.positive);
        // |grad| = 1/(1+x²) is small but positive on the window
        assert!(r.inf_grad_outside > 0.0 && r.inf_grad_outside < 0.01);
    }

    #[test]
    fn double_well_positive_inf_outside_zero_balls() {
        let s = Scenario::builtin("double-well").unwrap();
        let zeros = find_zeros(&s, 32, 1e-10, 1e-3).unwrap().zeros;
        let r = check_hypotheses(&s, &zeros, 0.25, 2000, 42).unwrap();
        assert!(r.inf_grad_outside > 0.05);
    }
}
