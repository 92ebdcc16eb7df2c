//! Symbolic interval bounds on cat(X,ω) from base values and rewrite
//! rules, plus the zero-count comparison that triggers the
//! homoclinic-cycle prediction.
//!
//! Convention: all values are pre-shifted so that cat(M,0) equals the
//! classical category plus one (cat(pt,0) = 1). Upper bounds are only
//! claimed for atoms with exact known values.

use crate::complex::{cat_cup_lower_bound, CellComplex, CupError, IntegerCocycle};
use crate::flow::HypothesisReport;
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CatError {
    #[error("invalid descriptor: {0}")]
    Format(String),
    #[error("descriptor references unknown complex `{0}`")]
    UnknownComplexRef(String),
    #[error("wedge-with-circle requires a nonzero ξ on the circle")]
    WedgeNeedsNonzeroXi,
    #[error(transparent)]
    Cup(#[from] CupError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpaceDescriptor {
    Point,
    /// ℝ with either ω = dx or ω = 0.
    Line { exact_dx: bool },
    Circle { xi: i64 },
    /// A named CellComplex input carrying its own cocycle.
    ComplexRef { name: String },
    WedgeWithCircle { base: Box<SpaceDescriptor>, xi: i64 },
    ProductWithRn {
        base: Box<SpaceDescriptor>,
        n: usize,
        f_bounded: bool,
    },
    AddBoundedExactForm {
        base: Box<SpaceDescriptor>,
        f_bounded: bool,
    },
    VectorBundleOver {
        base: Box<SpaceDescriptor>,
        rank: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatBound {
    pub lo: usize,
    /// None when no certified upper bound exists.
    pub hi: Option<usize>,
    /// Every number traces to a base value, a cup bound, or a named rule.
    pub provenance: Vec<String>,
    pub warnings: Vec<String>,
}

impl CatBound {
    fn exact(v: usize, why: &str) -> Self {
        Self {
            lo: v,
            hi: Some(v),
            provenance: vec![why.to_string()],
            warnings: Vec::new(),
        }
    }
}

pub type ComplexContext = BTreeMap<String, (CellComplex, IntegerCocycle)>;

pub fn base_values(atom: &SpaceDescriptor) -> Result<CatBound, CatError> {
    match atom {
        SpaceDescriptor::Point => Ok(CatBound::exact(1, "base value: cat(pt,0) = 1")),
        SpaceDescriptor::Line { exact_dx: true } => {
            Ok(CatBound::exact(0, "base value: cat(R,dx) = 0"))
        }
        SpaceDescriptor::Line { exact_dx: false } => {
            Ok(CatBound::exact(1, "base value: cat(R,0) = 1"))
        }
        SpaceDescriptor::Circle { xi: 0 } => Ok(CatBound::exact(
            2,
            "base value: cat(S1,0) = classical cat(S1)+1 = 2",
        )),
        SpaceDescriptor::Circle { .. } => Ok(CatBound::exact(
            1,
            "wedge rule with Y = pt: cat(S1,xi) = cat(pt) = 1 for xi != 0",
        )),
        other => Err(CatError::Format(format!("not an atom: {other:?}"))),
    }
}

pub fn apply_rules(desc: &SpaceDescriptor, ctx: &ComplexContext) -> Result<CatBound, CatError> {
    eval(desc, ctx, false)
}

/// `classical` forces every form to zero (used under the wedge rule,
/// which reduces to the classical category of the other summand).
fn eval(
    desc: &SpaceDescriptor,
    ctx: &ComplexContext,
    classical: bool,
) -> Result<CatBound, CatError> {
    match desc {
        SpaceDescriptor::Point => base_values(desc),
        SpaceDescriptor::Line { .. } if classical => {
            base_values(&SpaceDescriptor::Line { exact_dx: false })
        }
        SpaceDescriptor::Circle { .. } if classical => {
            base_values(&SpaceDescriptor::Circle { xi: 0 })
        }
        SpaceDescriptor::Line { .. } | SpaceDescriptor::Circle { .. } => base_values(desc),
        SpaceDescriptor::ComplexRef { name } => {
            let (x, xi) = ctx
                .get(name)
                .ok_or_else(|| CatError::UnknownComplexRef(name.clone()))?;
            let zero = IntegerCocycle::zero(x.count(1));
            let xi = if classical { &zero } else { xi };
            let mut warnings = Vec::new();
            let cup = match cat_cup_lower_bound(x, xi) {
                Ok(b) => b,
                Err(CupError::NotSimplicial) => {
                    warnings.push(format!(
                        "complex `{name}` is not simplicial; no cup bound available"
                    ));
                    0
                }
                Err(e) => return Err(e.into()),
            };
            // a nonempty space always has cat(X,0) >= 1 in the shifted
            // convention; with a nonzero form no such floor exists
            let lo = if xi.is_zero() { cup.max(1) } else { cup };
            Ok(CatBound {
                lo,
                hi: None,
                provenance: vec![format!(
                    "cup-product lower bound {cup} on complex `{name}`"
                )],
                warnings,
            })
        }
        SpaceDescriptor::WedgeWithCircle { base, xi } => {
            if *xi == 0 {
                return Err(CatError::WedgeNeedsNonzeroXi);
            }
            let mut b = eval(base, ctx, true)?;
            b.provenance
                .push("wedge rule: cat(Y v S1, xi) = cat(Y) for xi nonzero on S1".into());
            Ok(b)
        }
        SpaceDescriptor::ProductWithRn { base, n, f_bounded } => {
            let mut b = eval(base, ctx, classical)?;
            b.provenance.push(format!(
                "product rule: cat(M x R^{n}, omega + df) = cat(M, omega)"
            ));
            if !f_bounded {
                b.warnings
                    .push("obligation unmet: f bounded (product rule)".into());
            }
            Ok(b)
        }
        SpaceDescriptor::AddBoundedExactForm { base, f_bounded } => {
            let mut b = eval(base, ctx, classical)?;
            b.provenance
                .push("bounded-exact rule: cat(X, omega + df) = cat(X, omega)".into());
            if !f_bounded {
                b.warnings
                    .push("obligation unmet: f bounded (bounded-exact rule)".into());
            }
            Ok(b)
        }
        SpaceDescriptor::VectorBundleOver { base, rank } => {
            let mut b = eval(base, ctx, classical)?;
            b.provenance.push(format!(
                "bundle rule: cat(E, pi* omega) = cat(M, omega) for a rank-{rank} bundle"
            ));
            Ok(b)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Predicted,
    NotApplicable,
    HypothesisUnverified,
}

#[derive(Clone, Debug, Serialize)]
pub struct PredictionReport {
    pub verdict: Verdict,
    pub cat_lower_bound: usize,
    pub zero_count: usize,
    pub hypothesis_positive: bool,
    pub provenance: Vec<String>,
}

/// Main-theorem trigger: more category than zeros forces a homoclinic
/// cycle, provided the gradient hypotheses hold.
pub fn homoclinic_prediction(
    bound: &CatBound,
    zero_count: usize,
    hypothesis: &HypothesisReport,
) -> PredictionReport {
    let mut provenance = bound.provenance.clone();
    provenance.push(format!(
        "main theorem: cat(X,omega) > #zeros ({} vs {}) forces a homoclinic cycle",
        bound.lo, zero_count
    ));
    let verdict = if zero_count >= bound.lo {
        Verdict::NotApplicable
    } else if hypothesis.positive {
        Verdict::Predicted
    } else {
        provenance.push(
            "hypothesis check negative: c-estimate nonpositive, escapes detected, \
             or metric incomplete"
                .into(),
        );
        Verdict::HypothesisUnverified
    };
    PredictionReport {
        verdict,
        cat_lower_bound: bound.lo,
        zero_count,
        hypothesis_positive: hypothesis.positive,
        provenance,
    }
}

/// Parses the descriptor JSON expression tree.
pub fn parse_descriptor_json(text: &str) -> Result<SpaceDescriptor, CatError> {
    let v: serde_json::Value =
        serde_json::from_str(text).map_err(|e| CatError::Format(e.to_string()))?;
    parse_node(&v)
}

fn parse_node(v: &serde_json::Value) -> Result<SpaceDescriptor, CatError> {
    let obj = v
        .as_object()
        .ok_or_else(|| CatError::Format("descriptor nodes must be objects".into()))?;
    if let Some(atom) = obj.get("atom").and_then(|a| a.as_str()) {
        return match atom {
            "point" => Ok(SpaceDescriptor::Point),
            "line" => {
                let form = obj.get("form").and_then(|f| f.as_str()).unwrap_or("zero");
                match form {
                    "dx" => Ok(SpaceDescriptor::Line { exact_dx: true }),
                    "zero" => Ok(SpaceDescriptor::Line { exact_dx: false }),
                    other => Err(CatError::Format(format!("unknown line form `{other}`"))),
                }
            }
            "circle" => Ok(SpaceDescriptor::Circle {
                xi: obj.get("xi").and_then(|x| x.as_i64()).unwrap_or(0),
            }),
            "complex" => {
                let name = obj
                    .get("name")
                    .and_then(|n| n.as_str())
                    .ok_or_else(|| CatError::Format("complex atom needs a name".into()))?;
                Ok(SpaceDescriptor::ComplexRef { name: name.into() })
            }
            other => Err(CatError::Format(format!("unknown atom `{other}`"))),
        };
    }
    let op = obj
        .get("op")
        .and_then(|o| o.as_str())
        .ok_or_else(|| CatError::Format("node needs `atom` or `op`".into()))?;
    let base = Box::new(parse_node(obj.get("base").ok_or_else(|| {
        CatError::Format(format!("op `{op}` needs a base"))
    })?)?);
    let flag = |key: &str| obj.get(key).and_then(|b| b.as_bool()).unwrap_or(false);
    match op {
        "wedge-with-circle" => Ok(SpaceDescriptor::WedgeWithCircle {
            base,
            xi: obj.get("xi").and_then(|x| x.as_i64()).unwrap_or(0),
        }),
        "product-with-rn" => Ok(SpaceDescriptor::ProductWithRn {
            base,
            n: obj.get("n").and_then(|n| n.as_u64()).unwrap_or(1) as usize,
            f_bounded: flag("f_bounded"),
        }),
        "add-bounded-exact-form" => Ok(SpaceDescriptor::AddBoundedExactForm {
            base,
            f_bounded: flag("f_bounded"),
        }),
        "vector-bundle-over" => Ok(SpaceDescriptor::VectorBundleOver {
            base,
            rank: obj.get("rank").and_then(|r| r.as_u64()).unwrap_or(1) as usize,
        }),
        other => Err(CatError::Format(format!("unknown op `{other}`"))),
    }
}
