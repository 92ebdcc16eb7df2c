//! Chain complex of the infinite cyclic cover, over Λ.
//!
//! A spanning tree of the 1-skeleton fixes one lift per cell: tree
//! edges carry twist 0 and every vertex v gets the potential g(v) = ξ
//! along its tree path. The normalized edge holonomy is
//! h(e) = g(tail) + ξ(e) − g(head).

use super::cell::{CellComplex, ComplexError, IntegerCocycle};
use crate::laurent::{LaurentMatrix, LaurentPoly};
use num::rational::BigRational;
use num::One;
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct TwistedChainComplex {
    counts: Vec<usize>,
    /// boundaries[d−1] is ∂_d : C_d → C_{d−1} over Λ.
    boundaries: Vec<LaurentMatrix>,
    /// Vertex potentials of the spanning-tree gauge.
    pub gauge: Vec<i64>,
    /// Normalized holonomy per 1-cell (0 on tree edges).
    pub edge_holonomy: Vec<i64>,
    /// 1-cells in the spanning tree.
    pub tree_edges: Vec<usize>,
}

impl TwistedChainComplex {
    pub fn dimension(&self) -> usize {
        self.counts.len().saturating_sub(1)
    }

    pub fn count(&self, d: usize) -> usize {
        self.counts.get(d).copied().unwrap_or(0)
    }

    /// ∂_d over Λ, with empty matrices outside 1..=dimension.
    pub fn boundary(&self, d: usize) -> LaurentMatrix {
        if d == 0 {
            LaurentMatrix::zeros(0, self.count(0))
        } else if d <= self.dimension() {
            self.boundaries[d - 1].clone()
        } else {
            LaurentMatrix::zeros(self.count(d - 1), 0)
        }
    }
}

fn tau_pow(e: i64) -> LaurentPoly {
    LaurentPoly::monomial(e, BigRational::one())
}

/// Spanning-tree gauge via BFS over the given edge order.
fn spanning_tree(
    x: &CellComplex,
    xi: &IntegerCocycle,
    edge_order: &[usize],
) -> Result<(Vec<i64>, Vec<usize>), ComplexError> {
    let nv = x.count(0);
    if nv == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    // adjacency: vertex -> (edge, other endpoint, signed ξ when traversed tail→head)
    let mut adj: Vec<Vec<(usize, usize, i64)>> = vec![Vec::new(); nv];
    for &e in edge_order {
        let (head, tail) = x.edge_endpoints(e)?;
        adj[tail].push((e, head, xi.values[e]));
        adj[head].push((e, tail, -xi.values[e]));
    }
    let mut gauge = vec![0i64; nv];
    let mut seen = vec![false; nv];
    let mut tree = Vec::new();
    let mut queue = std::collections::VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        for &(e, w, dxi) in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                gauge[w] = gauge[v] + dxi;
                tree.push(e);
                queue.push_back(w);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(ComplexError::Disconnected);
    }
    Ok((gauge, tree))
}

pub fn cover_complex(
    x: &CellComplex,
    xi: &IntegerCocycle,
) -> Result<TwistedChainComplex, ComplexError> {
    let order: Vec<usize> = (0..x.count(1)).collect();
    cover_complex_with_edge_order(x, xi, &order)
}

/// Same as [`cover_complex`] but with an explicit edge order for the
/// spanning-tree BFS; different orders give different gauges and must
/// yield isomorphic homology.
pub fn cover_complex_with_edge_order(
    x: &CellComplex,
    xi: &IntegerCocycle,
    edge_order: &[usize],
) -> Result<TwistedChainComplex, ComplexError> {
    x.validate()?;
    x.check_cocycle(xi)?;
    let (gauge, tree_edges) = spanning_tree(x, xi, edge_order)?;

    let mut holonomy = vec![0i64; x.count(1)];
    for e in 0..x.count(1) {
        let (head, tail) = x.edge_endpoints(e)?;
        holonomy[e] = gauge[tail] + xi.values[e] - gauge[head];
    }

    let edge_lookup: BTreeMap<(usize, usize), usize> = match x.simplices() {
        Some(simps) => simps[1]
            .iter()
            .enumerate()
            .map(|(i, e)| ((e[0], e[1]), i))
            .collect(),
        None => BTreeMap::new(),
    };

    let dim = x.dimension();
    let mut boundaries = Vec::with_capacity(dim);
    for d in 1..=dim {
        let rows = x.count(d - 1);
        let cols = x.count(d);
        let mut m = LaurentMatrix::zeros(rows, cols);
        for c in 0..cols {
            let column = twisted_column(x, &holonomy, &edge_lookup, d, c)?;
            for (face, poly) in column {
                m.set(face, c, &poly + m.get(face, c));
            }
        }
        boundaries.push(m);
    }

    let twisted = TwistedChainComplex {
        counts: (0..=dim).map(|d| x.count(d)).collect(),
        boundaries,
        gauge,
        edge_holonomy: holonomy,
        tree_edges,
    };

    for d in 2..=dim {
        if !twisted.boundary(d - 1).mul(&twisted.boundary(d)).is_zero() {
            return Err(ComplexError::InsufficientAttachingData(d));
        }
    }
    Ok(twisted)
}

/// Twisted boundary entries of one d-cell, as face → Λ-coefficient.
fn twisted_column(
    x: &CellComplex,
    holonomy: &[i64],
    edge_lookup: &BTreeMap<(usize, usize), usize>,
    d: usize,
    c: usize,
) -> Result<BTreeMap<usize, LaurentPoly>, ComplexError> {
    let mut out: BTreeMap<usize, LaurentPoly> = BTreeMap::new();
    let mut add = |face: usize, p: LaurentPoly| {
        let entry = out.entry(face).or_insert_with(LaurentPoly::zero);
        *entry = &p + entry;
    };

    if d == 1 {
        let (head, tail) = x.edge_endpoints(c)?;
        add(head, tau_pow(holonomy[c]));
        add(tail, -&LaurentPoly::one());
        return Ok(out);
    }

    if let Some(simps) = x.simplices() {
        // Simplicial rule: only the 0-th face is twisted, by the holonomy
        // of the [v0,v1] edge of the simplex.
        let verts = &simps[d][c];
        let e01 = *edge_lookup
            .get(&(verts[0], verts[1]))
            .ok_or(ComplexError::SimplicialInconsistency { dim: d, cell: c })?;
        for (i, &(face, sign)) in x.boundary_of(d, c).iter().enumerate() {
            let w = if i == 0 { holonomy[e01] } else { 0 };
            let p = tau_pow(w);
            add(face, if sign > 0 { p } else { -&p });
        }
        return Ok(out);
    }

    if d == 2 {
        // Fox-derivative rule: the incidence list is the attaching word.
        let mut s = 0i64;
        for &(e, sign) in x.boundary_of(2, c) {
            if sign > 0 {
                add(e, tau_pow(s));
                s += holonomy[e];
            } else {
                s -= holonomy[e];
                add(e, -&tau_pow(s));
            }
        }
        return Ok(out);
    }

    // No attaching data above dimension 2 in plain CW mode: entries stay
    // untwisted and the ∂∂ check decides whether that was legitimate.
    for &(face, coeff) in x.boundary_of(d, c) {
        add(face, LaurentPoly::constant(BigRational::from_integer(coeff.into())));
    }
    Ok(out)
}
