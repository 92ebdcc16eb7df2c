//! Adaptive Dormand–Prince 5(4) integration of the negative gradient
//! flow ẋ = −grad ω, with the line integral ∫ω carried as an extra
//! state component (dI/dt = ω(ẋ) = −|grad ω|²_g in forward time).

use super::scenario::{FlowError, Model, Scenario};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    /// |grad ω| fell below the convergence tolerance.
    ConvergedToZero,
    /// Left every compact set while ∫ω stalled (euclidean models).
    EscapeToInfinity,
    /// Left the model domain (t-range of a product model).
    LeftDomain,
    /// A caller-supplied integral floor was crossed.
    IntegralFloor,
    TimeExhausted,
    StepUnderflow,
    /// Entered the Lyapunov box of the given zero.
    EnteredBox { zero: usize },
}

#[derive(Clone, Debug)]
pub struct IntegrateOptions {
    pub t_max: f64,
    pub tol_abs: f64,
    pub tol_rel: f64,
    pub max_steps: usize,
    /// |grad ω| below this counts as convergence to a zero.
    pub conv_grad_tol: f64,
    /// Keep integrating past t_max while the orbit is escaping, until
    /// the escape criterion resolves (euclidean models only).
    pub escape_tail: bool,
    pub max_records: usize,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        Self {
            t_max: 1e4,
            tol_abs: 1e-9,
            tol_rel: 1e-9,
            max_steps: 20_000_000,
            conv_grad_tol: 1e-8,
            escape_tail: true,
            max_records: 65_536,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    /// Recorded samples (decimated when long); positions unwrapped.
    pub times: Vec<f64>,
    pub positions: Vec<Vec<f64>>,
    pub integrals: Vec<f64>,
    pub termination: Termination,
    pub final_time: f64,
    pub final_position: Vec<f64>,
    pub final_integral: f64,
    pub steps_accepted: usize,
    pub steps_rejected: usize,
}

impl Trajectory {
    pub fn wrapped_positions(&self, scenario: &Scenario) -> Vec<Vec<f64>> {
        self.positions.iter().map(|x| scenario.wrap(x)).collect()
    }
}

// Dormand–Prince 5(4) tableau (the flow is autonomous, so the c-nodes
// never enter the right-hand side).
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

pub fn integrate_flow(
    scenario: &Scenario,
    x0: &[f64],
    direction: Direction,
    opts: &IntegrateOptions,
) -> Result<Trajectory, FlowError> {
    integrate_with(scenario, x0, direction, opts, |_, _, _| None)
}

/// Full integrator with a per-step stop hook, called after every
/// accepted step with (flow time, position, accumulated ∫ω).
pub fn integrate_with(
    scenario: &Scenario,
    x0: &[f64],
    direction: Direction,
    opts: &IntegrateOptions,
    mut stop: impl FnMut(f64, &[f64], f64) -> Option<Termination>,
) -> Result<Trajectory, FlowError> {
    let n = scenario.dim;
    let sign = match direction {
        Direction::Forward => -1.0,
        Direction::Backward => 1.0,
    };
    // state = [x, I]
    let rhs = |y: &[f64], out: &mut [f64]| -> Result<(), FlowError> {
        let grad = scenario.gradient(&y[..n])?;
        let omega = scenario.omega(&y[..n]);
        for i in 0..n {
            out[i] = sign * grad[i];
        }
        out[n] = sign * omega.iter().zip(&grad).map(|(a, b)| a * b).sum::<f64>();
        Ok(())
    };

    let mut y: Vec<f64> = x0.iter().copied().chain([0.0]).collect();
    scenario.gradient(x0)?;
    let mut t = 0.0f64;
    let mut h = (opts.t_max / 1e6).clamp(1e-8, 1e-3);

    let mut traj = Trajectory {
        times: vec![0.0],
        positions: vec![x0.to_vec()],
        integrals: vec![0.0],
        termination: Termination::TimeExhausted,
        final_time: 0.0,
        final_position: x0.to_vec(),
        final_integral: 0.0,
        steps_accepted: 0,
        steps_rejected: 0,
    };
    let mut record_stride = 1usize;

    // (t, I) history for the escape criterion's decade lookback
    let mut history: Vec<(f64, f64)> = vec![(0.0, 0.0)];

    let mut k: Vec<Vec<f64>> = vec![vec![0.0; n + 1]; 7];
    rhs(&y, &mut k[0])?;
    let mut ytmp = vec![0.0; n + 1];
    let mut y5 = vec![0.0; n + 1];

    let escape_model = scenario.model == Model::Euclidean;
    let center = scenario.window_center();
    let radius = scenario.window_radius();

    let finish = |traj: &mut Trajectory, term: Termination, t: f64, y: &[f64]| {
        traj.termination = term;
        traj.final_time = t;
        traj.final_position = y[..n].to_vec();
        traj.final_integral = y[n];
    };

    loop {
        if traj.steps_accepted + traj.steps_rejected >= opts.max_steps {
            finish(&mut traj, Termination::TimeExhausted, t, &y);
            break;
        }
        if t >= opts.t_max {
            let tail_mode = opts.escape_tail && escape_model && !scenario.in_window(&y[..n]);
            if !tail_mode {
                finish(&mut traj, Termination::TimeExhausted, t, &y);
                break;
            }
        } else if t + h > opts.t_max {
            h = opts.t_max - t;
        }
        if h < 1e-13 * t.abs().max(1.0) {
            finish(&mut traj, Termination::StepUnderflow, t, &y);
            break;
        }

        // stages (k[0] is fresh from FSAL)
        let mut failed = false;
        for s in 1..7 {
            for i in 0..=n {
                let mut acc = 0.0;
                for (j, kj) in k.iter().enumerate().take(s) {
                    acc += A[s][j] * kj[i];
                }
                ytmp[i] = y[i] + h * acc;
            }
            if rhs(&ytmp, &mut k[s]).is_err() {
                failed = true;
                break;
            }
        }
        if failed {
            h *= 0.5;
            traj.steps_rejected += 1;
            continue;
        }
        // 5th-order solution is the 7th stage argument (FSAL)
        y5.copy_from_slice(&ytmp);
        // error = y5 − y4
        let mut err_sq = 0.0;
        for i in 0..=n {
            let mut y4 = y[i];
            for (j, kj) in k.iter().enumerate() {
                y4 += h * B4[j] * kj[i];
            }
            let sc = opts.tol_abs + opts.tol_rel * y[i].abs().max(y5[i].abs());
            let e = (y5[i] - y4) / sc;
            err_sq += e * e;
        }
        let err = (err_sq / (n + 1) as f64).sqrt();

        if err > 1.0 {
            traj.steps_rejected += 1;
            h *= (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
            continue;
        }

        // accept
        t += h;
        y.copy_from_slice(&y5);
        k.swap(0, 6); // FSAL: last stage derivative becomes first of next step
        traj.steps_accepted += 1;
        h *= (0.9 * err.max(1e-10).powf(-0.2)).clamp(0.2, 5.0);

        history.push((t, y[n]));
        if traj.steps_accepted % record_stride == 0 {
            traj.times.push(t);
            traj.positions.push(y[..n].to_vec());
            traj.integrals.push(y[n]);
            if traj.times.len() >= opts.max_records {
                thin(&mut traj);
                record_stride *= 2;
            }
        }

        if let Some(term) = stop(t, &y[..n], y[n]) {
            finish(&mut traj, term, t, &y);
            break;
        }
        if let Model::Product { .. } = scenario.model {
            let (lo, hi) = scenario.window[n - 1];
            if y[n - 1] <= lo || y[n - 1] >= hi {
                finish(&mut traj, Termination::LeftDomain, t, &y);
                break;
            }
        }
        let speed_sq = scenario.grad_norm_sq(&y[..n])?;
        if speed_sq < opts.conv_grad_tol * opts.conv_grad_tol {
            finish(&mut traj, Termination::ConvergedToZero, t, &y);
            break;
        }
        if escape_model {
            let dist = y[..n]
                .iter()
                .zip(&center)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            if dist > 10.0 * radius {
                // ∫ω changed < 1e−3 over the last decade of time?
                let cutoff = t / 10.0;
                let idx = history.partition_point(|(s, _)| *s <= cutoff);
                if idx > 0 {
                    let (_, i_then) = history[idx - 1];
                    if (y[n] - i_then).abs() < 1e-3 {
                        finish(&mut traj, Termination::EscapeToInfinity, t, &y);
                        break;
                    }
                }
            }
        }
    }

    // always record the endpoint
    if traj.times.last() != Some(&traj.final_time) {
        traj.times.push(traj.final_time);
        traj.positions.push(traj.final_position.clone());
        traj.integrals.push(traj.final_integral);
    }
    Ok(traj)
}

fn thin(traj: &mut Trajectory) {
    let keep = |i: &usize| *i % 2 == 0;
    let idx: Vec<usize> = (0..traj.times.len()).filter(keep).collect();
    traj.times = idx.iter().map(|&i| traj.times[i]).collect();
    traj.positions = idx.iter().map(|&i| traj.positions[i].clone()).collect();
    traj.integrals = idx.iter().map(|&i| traj.integrals[i]).collect();
}

#[cfg(test)]
mod tests {
    use super::*;
    use super::super::scenario::parse_scenario_json;
    use approx::assert_relative_eq;

    fn quadratic() -> Scenario {
        parse_scenario_json(
            r#"{"model":"euclidean","dimension":1,"exact_part":"x1^2/2","window":[[-2.0,2.0]]}"#,
        )
        .unwrap()
    }

    #[test]
    fn quadratic_well_converges_with_half_integral() {
        let traj = integrate_flow(
            &quadratic(),
            &[1.0],
            Direction::Forward,
            &IntegrateOptions::default(),
        )
        .unwrap();
        assert_eq!(traj.termination, Termination::ConvergedToZero);
        assert!(traj.final_position[0].abs() < 1e-6);
        assert_relative_eq!(traj.final_integral, -0.5, epsilon = 1e-6);
    }

    #[test]
    fn flat_circle_runs_out_of_time_linearly() {
        let s = Scenario::builtin("t1-dtheta").unwrap();
        let opts = IntegrateOptions {
            t_max: 10.0,
            ..Default::default()
        };
        let traj = integrate_flow(&s, &[0.0], Direction::Forward, &opts).unwrap();
        assert_eq!(traj.termination, Termination::TimeExhausted);
        assert_relative_eq!(traj.final_integral, -10.0, epsilon = 1e-6);
        assert_relative_eq!(traj.final_position[0], -10.0, epsilon = 1e-6);
    }

    #[test]
    fn integral_matches_primitive_difference() {
        let s = Scenario::builtin("double-well").unwrap();
        let traj = integrate_flow(
            &s,
            &[2.0],
            Direction::Forward,
            &IntegrateOptions::default(),
        )
        .unwrap();
        assert_eq!(traj.termination, Termination::ConvergedToZero);
        assert_relative_eq!(traj.final_position[0], 1.0, epsilon = 1e-6);
        let f = |x: &[f64]| s.primitive(x).unwrap();
        assert_relative_eq!(
            traj.final_integral,
            f(&traj.final_position) - f(&[2.0]),
            epsilon = 1e-6
        );
    }

    #[test]
    fn integral_is_monotone_non_increasing() {
        let s = Scenario::builtin("t1-homoclinic").unwrap();
        let traj = integrate_flow(
            &s,
            &[0.43],
            Direction::Forward,
            &IntegrateOptions {
                t_max: 50.0,
                ..Default::default()
            },
        )
        .unwrap();
        let slack = 10.0 * 1e-9 * traj.steps_accepted as f64;
        for w in traj.integrals.windows(2) {
            assert!(w[1] <= w[0] + slack, "integral increased: {} -> {}", w[0], w[1]);
        }
    }

    #[test]
    fn forward_then_backward_returns_to_start() {
        let s = Scenario::builtin("double-well").unwrap();
        let opts = IntegrateOptions {
            t_max: 1.0,
            tol_abs: 1e-10,
            tol_rel: 1e-10,
            ..Default::default()
        };
        let fwd = integrate_flow(&s, &[2.0], Direction::Forward, &opts).unwrap();
        assert_eq!(fwd.termination, Termination::TimeExhausted);
        let back = integrate_flow(&s, &fwd.final_position, Direction::Backward, &opts).unwrap();
        assert!((back.final_position[0] - 2.0).abs() < 1e-5);
    }

    #[test]
    fn arctan_short_run_is_bounded_by_half_pi() {
        let s = Scenario::builtin("arctan").unwrap();
        let opts = IntegrateOptions {
            t_max: 100.0,
            escape_tail: false,
            ..Default::default()
        };
        let traj = integrate_flow(&s, &[0.0], Direction::Forward, &opts).unwrap();
        assert_eq!(traj.termination, Termination::TimeExhausted);
        assert!(traj.final_position[0] < -3.0);
        assert!(traj.final_integral.abs() < std::f64::consts::FRAC_PI_2);
        // exact solution satisfies x + x³/3 = −t
        let x = traj.final_position[0];
        assert!((x + x.powi(3) / 3.0 + 100.0).abs() < 1e-5);
    }

    #[test]
    fn stop_hook_halts_integration() {
        let s = quadratic();
        let traj = integrate_with(
            &s,
            &[1.0],
            Direction::Forward,
            &IntegrateOptions::default(),
            |_, x, _| (x[0] < 0.5).then_some(Termination::IntegralFloor),
        )
        .unwrap();
        assert_eq!(traj.termination, Termination::IntegralFloor);
        assert!(traj.final_position[0] < 0.5 && traj.final_position[0] > 0.4);
    }
}
