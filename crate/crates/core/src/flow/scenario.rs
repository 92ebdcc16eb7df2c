//! Chart-based model manifolds carrying a Riemannian metric and a
//! closed 1-form.
//!
//! A one-form is stored as harmonic part (constant period per axis)
//! plus the symbolic gradient of an exact part, so closedness holds by
//! construction; the validator still cross-checks it by finite
//! differences as a guard against custom components.

use super::expr::{parse_expr, Expr, ExprError, Var};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FlowError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("invalid scenario file: {0}")]
    Format(String),
    #[error("metric is not positive-definite at {0:?}")]
    MetricNotSpd(Vec<f64>),
    #[error("one-form is not closed at {point:?}: |dω| component {value:.3e}")]
    NotClosed { point: Vec<f64>, value: f64 },
    #[error("point has {got} coordinates, scenario has dimension {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("no zero of ω within zero_tol of {0:?}")]
    NoZero(Vec<f64>),
    #[error("no Lyapunov box at resolution (δ halved {0} times)")]
    NoBoxAtResolution(u32),
    #[error("sampled violation: {0}")]
    SampledViolation(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    Torus,
    Euclidean,
    /// base × (t_lo, t_hi) with t as last coordinate; the base chart is
    /// periodic when `base_torus` holds.
    Product { base_torus: bool },
}

#[derive(Clone, Debug)]
pub enum MetricSpec {
    Euclidean,
    Matrix(Vec<Vec<Expr>>),
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub model: Model,
    pub dim: usize,
    /// ω-period of each torus axis (0 on non-periodic axes).
    pub period_vector: Vec<f64>,
    /// Global primitive of the exact part of ω.
    pub exact_part: Option<Expr>,
    /// Exact-part components dω/dx_i; ω_i = period_vector[i] + this.
    pub components: Vec<Expr>,
    pub metric: MetricSpec,
    pub window: Vec<(f64, f64)>,
}

impl Scenario {
    /// Builds components by differentiating the exact part.
    pub fn from_parts(
        name: &str,
        model: Model,
        dim: usize,
        period_vector: Vec<f64>,
        exact_part: Option<Expr>,
        metric: MetricSpec,
        window: Vec<(f64, f64)>,
    ) -> Result<Self, FlowError> {
        if window.len() != dim || period_vector.len() != dim {
            return Err(FlowError::Format(
                "window and period_vector must match the dimension".into(),
            ));
        }
        let mut components = Vec::with_capacity(dim);
        for i in 0..dim {
            let var = coord_var(model, dim, i);
            components.push(match &exact_part {
                Some(f) => f.diff(var)?,
                None => Expr::Const(0.0),
            });
        }
        if let Some(f) = &exact_part {
            let n_base = match model {
                Model::Product { .. } => dim - 1,
                _ => dim,
            };
            if f.max_var().is_some_and(|k| k >= n_base) {
                return Err(ExprError::VarOutOfRange(n_base).into());
            }
            if f.uses_t() && !matches!(model, Model::Product { .. }) {
                return Err(FlowError::Format("`t` is only valid in product models".into()));
            }
        }
        Ok(Self {
            name: name.to_string(),
            model,
            dim,
            period_vector,
            exact_part,
            components,
            metric,
            window,
        })
    }

    pub fn is_periodic_axis(&self, i: usize) -> bool {
        match self.model {
            Model::Torus => true,
            Model::Euclidean => false,
            Model::Product { base_torus } => base_torus && i + 1 < self.dim,
        }
    }

    fn check_dim(&self, x: &[f64]) -> Result<(), FlowError> {
        if x.len() != self.dim {
            return Err(FlowError::Dimension {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(())
    }

    pub fn omega(&self, x: &[f64]) -> Vec<f64> {
        (0..self.dim)
            .map(|i| self.period_vector[i] + self.components[i].eval(x))
            .collect()
    }

    pub fn metric_at(&self, x: &[f64]) -> DMatrix<f64> {
        match &self.metric {
            MetricSpec::Euclidean => DMatrix::identity(self.dim, self.dim),
            MetricSpec::Matrix(rows) => {
                DMatrix::from_fn(self.dim, self.dim, |r, c| rows[r][c].eval(x))
            }
        }
    }

    /// grad ω = g⁻¹ ω.
    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>, FlowError> {
        self.check_dim(x)?;
        let w = DVector::from_vec(self.omega(x));
        match &self.metric {
            MetricSpec::Euclidean => Ok(w.as_slice().to_vec()),
            MetricSpec::Matrix(_) => {
                let g = self.metric_at(x);
                let chol = g
                    .cholesky()
                    .ok_or_else(|| FlowError::MetricNotSpd(x.to_vec()))?;
                Ok(chol.solve(&w).as_slice().to_vec())
            }
        }
    }

    /// |grad ω|²_g = ω(grad ω).
    pub fn grad_norm_sq(&self, x: &[f64]) -> Result<f64, FlowError> {
        let w = self.omega(x);
        let grad = self.gradient(x)?;
        Ok(w.iter().zip(&grad).map(|(a, b)| a * b).sum())
    }

    /// Global primitive f with ω = df, available when all periods vanish.
    pub fn primitive(&self, x: &[f64]) -> Option<f64> {
        if self.period_vector.iter().any(|p| p.abs() > 1e-12) {
            return None;
        }
        self.exact_part.as_ref().map(|f| f.eval(x))
    }

    /// Wraps periodic coordinates into [0,1).
    pub fn wrap(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .enumerate()
            .map(|(i, &v)| {
                if self.is_periodic_axis(i) {
                    v.rem_euclid(1.0)
                } else {
                    v
                }
            })
            .collect()
    }

    /// Euclidean chart distance, wrap-aware on periodic axes.
    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        a.iter()
            .zip(b)
            .enumerate()
            .map(|(i, (&p, &q))| {
                let mut d = (p - q).abs();
                if self.is_periodic_axis(i) {
                    d = d.rem_euclid(1.0);
                    d = d.min(1.0 - d);
                }
                d * d
            })
            .sum::<f64>()
            .sqrt()
    }

    pub fn in_window(&self, x: &[f64]) -> bool {
        x.iter().enumerate().all(|(i, &v)| {
            if self.is_periodic_axis(i) {
                true
            } else {
                let (lo, hi) = self.window[i];
                v >= lo && v <= hi
            }
        })
    }

    pub fn window_center(&self) -> Vec<f64> {
        self.window.iter().map(|(lo, hi)| (lo + hi) / 2.0).collect()
    }

    pub fn window_radius(&self) -> f64 {
        self.window
            .iter()
            .map(|(lo, hi)| (hi - lo) / 2.0)
            .fold(0.0, f64::max)
    }

    pub fn random_point(&self, rng: &mut impl Rng) -> Vec<f64> {
        self.window
            .iter()
            .map(|&(lo, hi)| rng.gen_range(lo..hi))
            .collect()
    }

    /// Samples SPD-ness of the metric and closedness of ω.
    pub fn validate(&self, seed: u64) -> Result<(), FlowError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = 1e-4;
        for _ in 0..32 {
            let x = self.random_point(&mut rng);
            if self.metric_at(&x).cholesky().is_none() {
                return Err(FlowError::MetricNotSpd(x));
            }
            for i in 0..self.dim {
                for j in (i + 1)..self.dim {
                    let didj = central_diff(&x, j, h, |y| self.omega(y)[i]);
                    let djdi = central_diff(&x, i, h, |y| self.omega(y)[j]);
                    let v = didj - djdi;
                    if v.abs() > 1e-6 {
                        return Err(FlowError::NotClosed { point: x, value: v });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn builtin(name: &str) -> Option<Scenario> {
        let text = match name {
            "arctan" => include_str!("../../../../assets/scenarios/arctan.json"),
            "t1-dtheta" => include_str!("../../../../assets/scenarios/t1-dtheta.json"),
            "t1-homoclinic" => include_str!("../../../../assets/scenarios/t1-homoclinic.json"),
            "double-well" => include_str!("../../../../assets/scenarios/double-well.json"),
            "t2-two-zero" => include_str!("../../../../assets/scenarios/t2-two-zero.json"),
            "product" => include_str!("../../../../assets/scenarios/product.json"),
            _ => return None,
        };
        Some(parse_scenario_json(text).expect("built-in scenario must parse"))
    }

    pub const BUILTIN_NAMES: [&'static str; 6] = [
        "arctan",
        "t1-dtheta",
        "t1-homoclinic",
        "double-well",
        "t2-two-zero",
        "product",
    ];
}

/// The symbolic variable of coordinate `i`.
fn coord_var(model: Model, dim: usize, i: usize) -> Var {
    match model {
        Model::Product { .. } if i + 1 == dim => Var::T,
        _ => Var::X(i),
    }
}

fn central_diff(x: &[f64], i: usize, h: f64, f: impl Fn(&[f64]) -> f64) -> f64 {
    let mut xp = x.to_vec();
    let mut xm = x.to_vec();
    xp[i] += h;
    xm[i] -= h;
    (f(&xp) - f(&xm)) / (2.0 * h)
}

#[derive(Deserialize)]
struct ScenarioFile {
    name: Option<String>,
    model: String,
    dimension: usize,
    period_vector: Option<Vec<f64>>,
    exact_part: Option<String>,
    metric: Option<serde_json::Value>,
    window: Option<Vec<(f64, f64)>>,
}

pub fn parse_scenario_json(text: &str) -> Result<Scenario, FlowError> {
    let file: ScenarioFile =
        serde_json::from_str(text).map_err(|e| FlowError::Format(e.to_string()))?;
    let model = match file.model.as_str() {
        "torus" => Model::Torus,
        "euclidean" => Model::Euclidean,
        "product" => Model::Product { base_torus: true },
        other => return Err(FlowError::Format(format!("unknown model `{other}`"))),
    };
    let dim = file.dimension;
    if dim == 0 {
        return Err(FlowError::Format("dimension must be positive".into()));
    }
    let period_vector = file.period_vector.unwrap_or_else(|| vec![0.0; dim]);
    if period_vector.len() != dim {
        return Err(FlowError::Format("period_vector length must equal dimension".into()));
    }
    if model == Model::Euclidean && period_vector.iter().any(|p| *p != 0.0) {
        return Err(FlowError::Format("euclidean model cannot carry periods".into()));
    }
    let exact_part = file.exact_part.as_deref().map(parse_expr).transpose()?;
    let metric = match &file.metric {
        None => MetricSpec::Euclidean,
        Some(serde_json::Value::String(s)) if s == "euclidean" => MetricSpec::Euclidean,
        Some(serde_json::Value::Array(rows)) => {
            let mut out = Vec::with_capacity(dim);
            for row in rows {
                let serde_json::Value::Array(cells) = row else {
                    return Err(FlowError::Format("metric rows must be arrays".into()));
                };
                let mut exprs = Vec::with_capacity(dim);
                for cell in cells {
                    let serde_json::Value::String(s) = cell else {
                        return Err(FlowError::Format("metric entries must be expression strings".into()));
                    };
                    exprs.push(parse_expr(s)?);
                }
                if exprs.len() != dim {
                    return Err(FlowError::Format("metric must be n×n".into()));
                }
                out.push(exprs);
            }
            if out.len() != dim {
                return Err(FlowError::Format("metric must be n×n".into()));
            }
            MetricSpec::Matrix(out)
        }
        Some(_) => return Err(FlowError::Format("metric must be \"euclidean\" or a matrix".into())),
    };
    let window = match file.window {
        Some(w) => {
            if w.len() != dim || w.iter().any(|(lo, hi)| lo >= hi) {
                return Err(FlowError::Format("window must be n nonempty intervals".into()));
            }
            w
        }
        None => match model {
            Model::Torus => vec![(0.0, 1.0); dim],
            _ => return Err(FlowError::Format("window is required for non-torus models".into())),
        },
    };
    let scenario = Scenario::from_parts(
        file.name.as_deref().unwrap_or("scenario"),
        model,
        dim,
        period_vector,
        exact_part,
        metric,
        window,
    )?;
    scenario.validate(42)?;
    Ok(scenario)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn builtins_parse_and_validate() {
        for name in Scenario::BUILTIN_NAMES {
            let s = Scenario::builtin(name).unwrap();
            s.validate(7).unwrap();
        }
    }

    #[test]
    fn arctan_gradient_matches_closed_form() {
        let s = Scenario::builtin("arctan").unwrap();
        for x in [-3.0, 0.0, 0.5, 10.0] {
            let g = s.gradient(&[x]).unwrap();
            assert_relative_eq!(g[0], 1.0 / (1.0 + x * x), epsilon = 1e-12);
        }
    }

    #[test]
    fn scaled_metric_halves_gradient() {
        let s = parse_scenario_json(
            r#"{"model":"euclidean","dimension":1,"exact_part":"x1",
                "metric":[["2"]],"window":[[-1.0,1.0]]}"#,
        )
        .unwrap();
        assert_relative_eq!(s.gradient(&[0.3]).unwrap()[0], 0.5, epsilon = 1e-12);
    }

    #[test]
    fn homoclinic_omega_and_period() {
        let s = Scenario::builtin("t1-homoclinic").unwrap();
        // ω = (1 − cos 2πθ)dθ
        for theta in [0.1, 0.37, 0.9] {
            assert_relative_eq!(
                s.omega(&[theta])[0],
                1.0 - (2.0 * std::f64::consts::PI * theta).cos(),
                epsilon = 1e-12
            );
        }
        // quadrature of ω over one wrap equals the declared period
        let n = 20_000;
        let integral: f64 = (0..n).map(|k| s.omega(&[(k as f64 + 0.5) / n as f64])[0] / n as f64).sum();
        assert_relative_eq!(integral, s.period_vector[0], epsilon = 1e-8);
    }

    #[test]
    fn product_one_form_components() {
        let s = Scenario::builtin("product").unwrap();
        let x = [0.3, -0.4];
        let two_pi = 2.0 * std::f64::consts::PI;
        let f = 1.0 - (two_pi * x[0]).cos();
        let df = two_pi * (two_pi * x[0]).sin();
        let w = s.omega(&x);
        assert_relative_eq!(w[0], f + x[1] * df, epsilon = 1e-12);
        assert_relative_eq!(w[1], f + x[1] * x[1], epsilon = 1e-12);
    }

    #[test]
    fn torus_wrap_distance() {
        let s = Scenario::builtin("t1-dtheta").unwrap();
        assert_relative_eq!(s.distance(&[0.05], &[0.95]), 0.1, epsilon = 1e-12);
        assert_eq!(s.wrap(&[1.25]), vec![0.25]);
    }

    #[test]
    fn non_closed_form_rejected() {
        // custom components bypass from_parts, so corrupt a parsed one
        let mut s = Scenario::builtin("t2-two-zero").unwrap();
        s.components[0] = parse_expr("x2").unwrap();
        assert!(matches!(s.validate(7), Err(FlowError::NotClosed { .. })));
    }

    #[test]
    fn bad_files_rejected() {
        assert!(parse_scenario_json(r#"{"model":"spherical","dimension":1}"#).is_err());
        assert!(parse_scenario_json(r#"{"model":"euclidean","dimension":1}"#).is_err());
        assert!(parse_scenario_json(
            r#"{"model":"torus","dimension":1,"exact_part":"t"}"#
        )
        .is_err());
    }
}
