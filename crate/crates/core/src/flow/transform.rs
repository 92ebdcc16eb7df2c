//! Scenario constructors derived from existing ones: the product
//! deformation M × (t_lo,t_hi) with ω′ = ω + d(tf + t³/3), and
//! conformal metric perturbations g′ = φ·g.

use super::expr::Expr;
use super::scenario::{FlowError, MetricSpec, Model, Scenario};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn b(e: Expr) -> Box<Expr> {
    Box::new(e)
}

/// ω′ = ω + d(t·f + t³/3) on base × (t_lo, t_hi), with the product
/// metric g ⊕ dt². `f` must be ≥ 0 and vanish exactly at the zeros of
/// the base form (sampled, not proved).
pub fn product_scenario(
    base: &Scenario,
    f: &Expr,
    t_range: (f64, f64),
) -> Result<Scenario, FlowError> {
    if matches!(base.model, Model::Product { .. }) {
        return Err(FlowError::Format("cannot stack product models".into()));
    }
    if f.uses_t() || f.max_var().is_some_and(|k| k >= base.dim) {
        return Err(FlowError::Format("f must be a function on the base".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..256 {
        let x = base.random_point(&mut rng);
        if f.eval(&x) < -1e-12 {
            return Err(FlowError::SampledViolation(format!(
                "f < 0 at {x:?}"
            )));
        }
    }

    let t = Expr::Var(super::expr::Var::T);
    let tf = Expr::Mul(b(t.clone()), b(f.clone()));
    let t_cubed = Expr::Div(
        b(Expr::Pow(b(t), b(Expr::Const(3.0)))),
        b(Expr::Const(3.0)),
    );
    let addon = Expr::Add(b(tf), b(t_cubed));
    let exact = match &base.exact_part {
        Some(g) => Some(Expr::Add(b(g.clone()), b(addon))),
        None => Some(addon),
    };

    let dim = base.dim + 1;
    let metric = match &base.metric {
        MetricSpec::Euclidean => MetricSpec::Euclidean,
        MetricSpec::Matrix(rows) => {
            let mut out = vec![vec![Expr::Const(0.0); dim]; dim];
            for (i, row) in rows.iter().enumerate() {
                for (j, e) in row.iter().enumerate() {
                    out[i][j] = e.clone();
                }
            }
            out[dim - 1][dim - 1] = Expr::Const(1.0);
            MetricSpec::Matrix(out)
        }
    };

    let mut period_vector = base.period_vector.clone();
    period_vector.push(0.0);
    let mut window = base.window.clone();
    window.push(t_range);

    let scenario = Scenario::from_parts(
        &format!("{}-product", base.name),
        Model::Product {
            base_torus: base.model == Model::Torus,
        },
        dim,
        period_vector,
        exact,
        metric,
        window,
    )?;
    scenario.validate(42)?;
    Ok(scenario)
}

/// g′ = φ·g with a conformal factor sampled to lie in [1/C, C].
pub fn perturb_metric(
    scenario: &Scenario,
    phi: &Expr,
    c_bound: f64,
) -> Result<Scenario, FlowError> {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..256 {
        let x = scenario.random_point(&mut rng);
        let v = phi.eval(&x);
        if !(1.0 / c_bound - 1e-12..=c_bound + 1e-12).contains(&v) {
            return Err(FlowError::SampledViolation(format!(
                "conformal factor {v} outside [1/{c_bound}, {c_bound}] at {x:?}"
            )));
        }
    }
    let n = scenario.dim;
    let rows: Vec<Vec<Expr>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let base = match &scenario.metric {
                        MetricSpec::Euclidean => {
                            Expr::Const(if i == j { 1.0 } else { 0.0 })
                        }
                        MetricSpec::Matrix(rows) => rows[i][j].clone(),
                    };
                    match base {
                        Expr::Const(c) if c == 0.0 => Expr::Const(0.0),
                        base => Expr::Mul(b(phi.clone()), b(base)),
                    }
                })
                .collect()
        })
        .collect();
    let mut out = scenario.clone();
    out.name = format!("{}-perturbed", scenario.name);
    out.metric = MetricSpec::Matrix(rows);
    out.validate(42)?;
    Ok(out)
}
