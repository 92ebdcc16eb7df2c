//! Heteroclinic edge detection between zeros and enumeration of
//! homoclinic cycles in the resulting connection multigraph.

use super::integrate::{integrate_with, Direction, IntegrateOptions, Termination, Trajectory};
use super::lyapunov::LyapunovBox;
use super::scenario::{FlowError, Scenario};
use super::zeros::{Classification, ZeroPoint};
use serde::Serialize;

#[derive(Clone, Debug)]
pub struct HeteroclinicEdge {
    pub source: usize,
    pub target: usize,
    /// Seed point on the unstable direction (chart coordinates).
    pub seed: Vec<f64>,
    pub integral_drop: f64,
    pub orbit: Trajectory,
}

#[derive(Clone, Debug, Serialize)]
pub struct InconclusiveOrbit {
    pub source: usize,
    pub seed: Vec<f64>,
    pub termination: Termination,
    pub final_integral: f64,
}

#[derive(Clone, Debug, Default)]
pub struct DetectionReport {
    pub edges: Vec<HeteroclinicEdge>,
    pub inconclusive: Vec<InconclusiveOrbit>,
}

#[derive(Clone, Debug)]
pub struct DetectOptions {
    pub seed_radius: f64,
    pub t_max: f64,
    pub n_floor: f64,
    pub tol_abs: f64,
    pub tol_rel: f64,
}

impl DetectOptions {
    /// N_floor default: 3× the largest period magnitude + 10.
    pub fn for_scenario(scenario: &Scenario) -> Self {
        let max_period = scenario
            .period_vector
            .iter()
            .fold(0.0f64, |a, p| a.max(p.abs()));
        Self {
            seed_radius: 1e-4,
            t_max: 1e4,
            n_floor: 3.0 * max_period + 10.0,
            tol_abs: 1e-9,
            tol_rel: 1e-9,
        }
    }
}

/// Seed directions for one zero: ± unstable eigendirections when
/// available, otherwise 2n samples on a small circle (or the ± axes
/// above dimension two).
fn seed_directions(scenario: &Scenario, zero: &ZeroPoint) -> Vec<Vec<f64>> {
    let n = scenario.dim;
    let hyperbolic_dirs = match zero.classification {
        Classification::Hyperbolic { .. } if !zero.unstable_dirs.is_empty() => true,
        _ => false,
    };
    if hyperbolic_dirs {
        let mut out = Vec::new();
        for d in &zero.unstable_dirs {
            out.push(d.clone());
            out.push(d.iter().map(|v| -v).collect());
        }
        return out;
    }
    match n {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..4)
            .map(|k| {
                let a = std::f64::consts::FRAC_PI_2 * k as f64;
                vec![a.cos(), a.sin()]
            })
            .collect(),
        _ => (0..n)
            .flat_map(|j| {
                let mut plus = vec![0.0; n];
                let mut minus = vec![0.0; n];
                plus[j] = 1.0;
                minus[j] = -1.0;
                [plus, minus]
            })
            .collect(),
    }
}

pub fn detect_heteroclinics(
    scenario: &Scenario,
    zeros: &[ZeroPoint],
    boxes: &[LyapunovBox],
    opts: &DetectOptions,
) -> Result<DetectionReport, FlowError> {
    assert_eq!(zeros.len(), boxes.len());
    let mut report = DetectionReport::default();
    let int_opts = IntegrateOptions {
        t_max: opts.t_max,
        tol_abs: opts.tol_abs,
        tol_rel: opts.tol_rel,
        ..Default::default()
    };
    for (i, zero) in zeros.iter().enumerate() {
        for dir in seed_directions(scenario, zero) {
            let x0: Vec<f64> = zero
                .position
                .iter()
                .zip(&dir)
                .map(|(p, d)| p + opts.seed_radius * d)
                .collect();
            let mut exited_source = false;
            let traj = integrate_with(
                scenario,
                &x0,
                Direction::Forward,
                &int_opts,
                |_, x, integral| {
                    if !exited_source {
                        if scenario.distance(x, &boxes[i].center) > boxes[i].epsilon {
                            exited_source = true;
                        }
                        return None;
                    }
                    if integral < -opts.n_floor {
                        return Some(Termination::IntegralFloor);
                    }
                    boxes
                        .iter()
                        .position(|b| b.contains(scenario, x))
                        .map(|j| Termination::EnteredBox { zero: j })
                },
            )?;
            match traj.termination {
                Termination::EnteredBox { zero: j } => {
                    report.edges.push(HeteroclinicEdge {
                        source: i,
                        target: j,
                        seed: x0,
                        integral_drop: traj.final_integral,
                        orbit: traj,
                    });
                }
                // converged back to the source without ever leaving its
                // box: not a connection, not worth reporting
                Termination::ConvergedToZero if !exited_source => {}
                term => {
                    report.inconclusive.push(InconclusiveOrbit {
                        source: i,
                        seed: x0,
                        termination: term,
                        final_integral: traj.final_integral,
                    });
                }
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleReport {
    /// Indices into the edge list, in traversal order.
    pub edge_indices: Vec<usize>,
    /// Zero indices visited (first == last omitted).
    pub zeros: Vec<usize>,
    /// Length-one cycles are homoclinic orbits.
    pub homoclinic_orbit: bool,
}

/// All elementary directed cycles of the connection multigraph; each
/// edge is used at most once per cycle and no intermediate zero
/// repeats.
pub fn find_homoclinic_cycles(edges: &[(usize, usize)]) -> Vec<CycleReport> {
    let mut cycles = Vec::new();
    for (e, &(s, t)) in edges.iter().enumerate() {
        if s == t {
            cycles.push(CycleReport {
                edge_indices: vec![e],
                zeros: vec![s],
                homoclinic_orbit: true,
            });
        }
    }
    let max_node = edges.iter().map(|&(s, t)| s.max(t)).max().map_or(0, |m| m + 1);
    for start in 0..max_node {
        let mut path = Vec::new();
        let mut visited = vec![false; max_node];
        dfs(edges, start, start, &mut visited, &mut path, &mut cycles);
    }
    cycles.sort_by(|a, b| (a.zeros.len(), &a.edge_indices).cmp(&(b.zeros.len(), &b.edge_indices)));
    cycles
}

fn dfs(
    edges: &[(usize, usize)],
    start: usize,
    u: usize,
    visited: &mut Vec<bool>,
    path: &mut Vec<usize>,
    cycles: &mut Vec<CycleReport>,
) {
    visited[u] = true;
    for (e, &(s, t)) in edges.iter().enumerate() {
        if s != u || t == s || path.contains(&e) {
            continue;
        }
        if t == start {
            if path.len() >= 1 {
                let mut idx = path.clone();
                idx.push(e);
                let zeros: Vec<usize> = std::iter::once(start)
                    .chain(idx[..idx.len() - 1].iter().map(|&k| edges[k].1))
                    .collect();
                cycles.push(CycleReport {
                    edge_indices: idx,
                    zeros,
                    homoclinic_orbit: false,
                });
            }
            continue;
        }
        // intermediate nodes restricted to > start so each cycle is
        // enumerated from its smallest zero only
        if t < start || visited[t] {
            continue;
        }
        path.push(e);
        dfs(edges, start, t, visited, path, cycles);
        path.pop();
    }
    visited[u] = false;
}

#[cfg(test)]
mod tests {
    use super::*;
    use super::super::lyapunov::{lyapunov_box, BoxOptions};
    use super::super::zeros::find_zeros;

    fn boxes_for(
        scenario: &Scenario,
        zeros: &[ZeroPoint],
        opts: &BoxOptions,
    ) -> Vec<LyapunovBox> {
        (0..zeros.len())
            .map(|i| lyapunov_box(scenario, zeros, i, opts).unwrap())
            .collect()
    }

    #[test]
    fn double_well_saddle_connects_to_both_minima() {
        let s = Scenario::builtin("double-well").unwrap();
        let zeros = find_zeros(&s, 32, 1e-10, 1e-3).unwrap().zeros;
        let boxes = boxes_for(&s, &zeros, &BoxOptions::default());
        let report = detect_heteroclinics(
            &s,
            &zeros,
            &boxes,
            &DetectOptions::for_scenario(&s),
        )
        .unwrap();
        let mut pairs: Vec<(usize, usize)> =
            report.edges.iter().map(|e| (e.source, e.target)).collect();
        pairs.sort_unstable();
        // zeros sorted: 0 ↦ −1, 1 ↦ saddle, 2 ↦ +1
        assert_eq!(pairs, vec![(1, 0), (1, 2)]);
        for e in &report.edges {
            assert!(e.integral_drop < 0.0);
        }
    }

    #[test]
    fn circle_homoclinic_orbit_detected() {
        let s = Scenario::builtin("t1-homoclinic").unwrap();
        let zeros = find_zeros(&s, 32, 1e-9, 1e-3).unwrap().zeros;
        let boxes = boxes_for(&s, &zeros, &BoxOptions::default());
        let report = detect_heteroclinics(
            &s,
            &zeros,
            &boxes,
            &DetectOptions::for_scenario(&s),
        )
        .unwrap();
        let pairs: Vec<(usize, usize)> =
            report.edges.iter().map(|e| (e.source, e.target)).collect();
        assert_eq!(pairs, vec![(0, 0)]);
        let cycles = find_homoclinic_cycles(&pairs);
        assert_eq!(cycles.len(), 1);
        assert!(cycles[0].homoclinic_orbit);
    }

    #[test]
    fn cycle_enumeration_on_small_multigraphs() {
        assert!(find_homoclinic_cycles(&[(0, 1)]).is_empty());

        let self_loop = find_homoclinic_cycles(&[(0, 0)]);
        assert_eq!(self_loop.len(), 1);
        assert!(self_loop[0].homoclinic_orbit);

        // {A→B, B→A, A→A} → (A→A) and (A→B→A)
        let cycles = find_homoclinic_cycles(&[(0, 1), (1, 0), (0, 0)]);
        assert_eq!(cycles.len(), 2);
        assert!(cycles.iter().any(|c| c.homoclinic_orbit && c.zeros == vec![0]));
        assert!(cycles
            .iter()
            .any(|c| !c.homoclinic_orbit && c.zeros == vec![0, 1]));

        // parallel edges give distinct two-cycles
        let cycles = find_homoclinic_cycles(&[(0, 1), (0, 1), (1, 0)]);
        assert_eq!(cycles.len(), 2);
    }
}
