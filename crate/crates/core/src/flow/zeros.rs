//! Zero finding for closed 1-forms: grid-seeded Newton iteration with
//! wrap-aware deduplication and linearization-based classification.

use super::scenario::{FlowError, Scenario};
use nalgebra::{DMatrix, DVector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    Hyperbolic { unstable: usize },
    Degenerate,
}

#[derive(Clone, Debug)]
pub struct ZeroPoint {
    /// Wrapped chart coordinates.
    pub position: Vec<f64>,
    /// Jacobian of grad ω at the zero.
    pub jacobian: DMatrix<f64>,
    pub classification: Classification,
    /// Unit eigendirections with positive flow eigenvalue (empty when
    /// the Jacobian is not symmetric enough to trust eigenvectors, or
    /// the zero is degenerate — callers fall back to circular seeding).
    pub unstable_dirs: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, Default)]
pub struct ZeroReport {
    pub zeros: Vec<ZeroPoint>,
    pub warnings: Vec<String>,
}

const HYPERBOLIC_TOL: f64 = 1e-6;

/// Central-difference Jacobian of grad ω.
fn grad_jacobian(scenario: &Scenario, x: &[f64]) -> Result<DMatrix<f64>, FlowError> {
    let n = scenario.dim;
    let h = 1e-6;
    let mut m = DMatrix::zeros(n, n);
    for j in 0..n {
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[j] += h;
        xm[j] -= h;
        let gp = scenario.gradient(&xp)?;
        let gm = scenario.gradient(&xm)?;
        for i in 0..n {
            m[(i, j)] = (gp[i] - gm[i]) / (2.0 * h);
        }
    }
    Ok(m)
}

fn omega_jacobian(scenario: &Scenario, x: &[f64]) -> DMatrix<f64> {
    let n = scenario.dim;
    let h = 1e-6;
    DMatrix::from_fn(n, n, |i, j| {
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[j] += h;
        xm[j] -= h;
        (scenario.omega(&xp)[i] - scenario.omega(&xm)[i]) / (2.0 * h)
    })
}

fn newton(scenario: &Scenario, seed: &[f64], zero_tol: f64) -> Option<Vec<f64>> {
    let mut x = seed.to_vec();
    let mut converged = false;
    // After reaching zero_tol keep polishing: degenerate zeros converge
    // only linearly, and classification needs the position tight.
    for _ in 0..150 {
        let f = DVector::from_vec(scenario.omega(&x));
        if f.amax() < zero_tol {
            converged = true;
        }
        let j = omega_jacobian(scenario, &x);
        let Some(step) = j.lu().solve(&(-f)) else {
            break;
        };
        if converged && step.amax() < 1e-13 {
            break;
        }
        if !converged && step.amax() > 1.0 {
            return None; // diverging seed
        }
        for i in 0..x.len() {
            x[i] += step[i];
        }
        if !scenario.in_window(&x) {
            return None;
        }
    }
    converged.then(|| scenario.wrap(&x))
}

fn classify(scenario: &Scenario, x: &[f64]) -> Result<(DMatrix<f64>, Classification, Vec<Vec<f64>>), FlowError> {
    let j = grad_jacobian(scenario, x)?;
    // flow linearization is −J
    let a = -j.clone();
    let eigs = a.complex_eigenvalues();
    let degenerate = eigs.iter().any(|l| l.re.abs() <= HYPERBOLIC_TOL);
    let classification = if degenerate {
        Classification::Degenerate
    } else {
        Classification::Hyperbolic {
            unstable: eigs.iter().filter(|l| l.re > HYPERBOLIC_TOL).count(),
        }
    };
    let mut dirs = Vec::new();
    let symmetric = (&a - a.transpose()).amax() < 1e-7;
    if !degenerate && symmetric {
        let se = nalgebra::SymmetricEigen::new(a.clone());
        for (i, &l) in se.eigenvalues.iter().enumerate() {
            if l > HYPERBOLIC_TOL {
                let v = se.eigenvectors.column(i);
                dirs.push(v.iter().copied().collect());
            }
        }
    }
    Ok((j, classification, dirs))
}

pub fn find_zeros(
    scenario: &Scenario,
    grid_density: usize,
    zero_tol: f64,
    merge_radius: f64,
) -> Result<ZeroReport, FlowError> {
    let n = scenario.dim;
    let mut found: Vec<Vec<f64>> = Vec::new();
    let per_axis = grid_density.max(2);
    let total = per_axis.pow(n as u32);
    for flat in 0..total {
        let mut seed = Vec::with_capacity(n);
        let mut rem = flat;
        for i in 0..n {
            let k = rem % per_axis;
            rem /= per_axis;
            let (lo, hi) = scenario.window[i];
            seed.push(lo + (hi - lo) * (k as f64 + 0.5) / per_axis as f64);
        }
        if let Some(z) = newton(scenario, &seed, zero_tol) {
            if !found.iter().any(|p| scenario.distance(p, &z) < merge_radius) {
                found.push(z);
            }
        }
    }
    found.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut warnings = Vec::new();
    for i in 0..found.len() {
        for j in (i + 1)..found.len() {
            let d = scenario.distance(&found[i], &found[j]);
            if d < 2.0 * merge_radius {
                warnings.push(format!(
                    "zeros {i} and {j} are only {d:.3e} apart (< 2×merge_radius); \
                     increase resolution to separate them"
                ));
            }
        }
    }

    let mut zeros = Vec::with_capacity(found.len());
    for position in found {
        let (jacobian, classification, unstable_dirs) = classify(scenario, &position)?;
        zeros.push(ZeroPoint {
            position,
            jacobian,
            classification,
            unstable_dirs,
        });
    }
    Ok(ZeroReport { zeros, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn nowhere_zero_form_gives_empty_list() {
        let s = Scenario::builtin("t1-dtheta").unwrap();
        let r = find_zeros(&s, 16, 1e-9, 1e-3).unwrap();
        assert!(r.zeros.is_empty());
    }

    #[test]
    fn homoclinic_circle_has_one_degenerate_zero() {
        let s = Scenario::builtin("t1-homoclinic").unwrap();
        let r = find_zeros(&s, 32, 1e-9, 1e-3).unwrap();
        assert_eq!(r.zeros.len(), 1);
        let z = &r.zeros[0];
        assert!(z.position[0].min(1.0 - z.position[0]) < 1e-4);
        assert_eq!(z.classification, Classification::Degenerate);
    }

    #[test]
    fn double_well_zeros_and_classification() {
        let s = Scenario::builtin("double-well").unwrap();
        let r = find_zeros(&s, 32, 1e-10, 1e-3).unwrap();
        assert_eq!(r.zeros.len(), 3);
        let pos: Vec<f64> = r.zeros.iter().map(|z| z.position[0]).collect();
        assert_relative_eq!(pos[0], -1.0, epsilon = 1e-6);
        assert_relative_eq!(pos[1], 0.0, epsilon = 1e-6);
        assert_relative_eq!(pos[2], 1.0, epsilon = 1e-6);
        assert_eq!(r.zeros[0].classification, Classification::Hyperbolic { unstable: 0 });
        assert_eq!(r.zeros[1].classification, Classification::Hyperbolic { unstable: 1 });
        assert_eq!(r.zeros[2].classification, Classification::Hyperbolic { unstable: 0 });
        // the saddle's unstable direction is ±x
        assert_eq!(r.zeros[1].unstable_dirs.len(), 1);
        assert_relative_eq!(r.zeros[1].unstable_dirs[0][0].abs(), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn two_zero_torus() {
        let s = Scenario::builtin("t2-two-zero").unwrap();
        let r = find_zeros(&s, 24, 1e-9, 1e-3).unwrap();
        assert_eq!(r.zeros.len(), 2);
        let mut pts: Vec<(f64, f64)> = r
            .zeros
            .iter()
            .map(|z| (z.position[0], z.position[1]))
            .collect();
        pts.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        let wrap0 = |v: f64| v.min(1.0 - v);
        assert!(wrap0(pts[0].0) < 1e-5 && wrap0(pts[0].1) < 1e-5);
        assert!(wrap0(pts[1].0) < 1e-5 && (pts[1].1 - 0.5).abs() < 1e-5);
    }
}
