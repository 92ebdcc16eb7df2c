//! Finite CW complexes with an integer 1-cocycle.
//!
//! Boundary data is ordered: for a 1-cell the list is [head(+1),
//! tail(−1)] (explicit even for loops), and for a non-simplicial 2-cell
//! the list is read as the attaching word, one ±1 letter per entry.
//! Simplicial complexes carry sorted vertex lists per simplex and derive
//! their boundaries from vertex deletion.

use serde::Deserialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("boundary composition ∂∂ ≠ 0 between dimensions ({0}, {1})")]
    BoundaryComposition(usize, usize),
    #[error("1-cell {0} must list exactly one +1 (head) and one -1 (tail) incidence")]
    BadOneCellBoundary(usize),
    #[error("2-cell {0} attaching word must use ±1 letters")]
    BadAttachingWord(usize),
    #[error("cell {cell} in dimension {dim} references face {face} out of range")]
    FaceOutOfRange { dim: usize, cell: usize, face: usize },
    #[error("simplicial structure inconsistent at dimension {dim}, cell {cell}")]
    SimplicialInconsistency { dim: usize, cell: usize },
    #[error("cocycle condition fails on 2-cell {0}")]
    NotACocycle(usize),
    #[error("cocycle must assign a value to each of the {expected} 1-cells, got {got}")]
    CocycleLength { expected: usize, got: usize },
    #[error("complex is disconnected; the covering gauge is undefined across components")]
    Disconnected,
    #[error("operation requires a simplicial structure")]
    NotSimplicial,
    #[error("twisted boundary of dimension {0} needs attaching data (∂∂ ≠ 0 over Λ)")]
    InsufficientAttachingData(usize),
    #[error("invalid complex file: {0}")]
    Format(String),
}

/// One signed incidence: (face index in dimension d−1, coefficient).
pub type Incidence = (usize, i64);

#[derive(Clone, Debug)]
pub struct CellComplex {
    counts: Vec<usize>,
    /// boundaries[d-1][cell] is the ordered incidence list of a d-cell.
    boundaries: Vec<Vec<Vec<Incidence>>>,
    /// simplices[d][cell] is the sorted vertex list, when simplicial.
    simplices: Option<Vec<Vec<Vec<usize>>>>,
}

/// An integer value per 1-cell, required to satisfy the cocycle
/// condition on every 2-cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerCocycle {
    pub values: Vec<i64>,
}

impl IntegerCocycle {
    pub fn new(values: Vec<i64>) -> Self {
        Self { values }
    }

    pub fn zero(edges: usize) -> Self {
        Self { values: vec![0; edges] }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }
}

impl CellComplex {
    pub fn new(counts: Vec<usize>, boundaries: Vec<Vec<Vec<Incidence>>>) -> Self {
        Self {
            counts,
            boundaries,
            simplices: None,
        }
    }

    /// Builds a simplicial complex from per-dimension vertex lists.
    /// Vertex lists are sorted; boundaries come from vertex deletion
    /// with alternating signs.
    pub fn from_simplices(mut simplices: Vec<Vec<Vec<usize>>>) -> Result<Self, ComplexError> {
        for dim in simplices.iter_mut() {
            for s in dim.iter_mut() {
                s.sort_unstable();
            }
        }
        let counts: Vec<usize> = simplices.iter().map(|d| d.len()).collect();
        let mut boundaries = Vec::new();
        for d in 1..simplices.len() {
            let lookup: BTreeMap<&[usize], usize> = simplices[d - 1]
                .iter()
                .enumerate()
                .map(|(i, s)| (s.as_slice(), i))
                .collect();
            let mut dim_bnd = Vec::with_capacity(simplices[d].len());
            for (cell, verts) in simplices[d].iter().enumerate() {
                let mut list = Vec::with_capacity(verts.len());
                for i in 0..verts.len() {
                    let mut face: Vec<usize> = verts.clone();
                    face.remove(i);
                    let idx = *lookup.get(face.as_slice()).ok_or(
                        ComplexError::SimplicialInconsistency { dim: d, cell },
                    )?;
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    list.push((idx, sign));
                }
                // For d=1 this already matches the head(+1)/tail(−1)
                // convention: ∂[a,b] = [b] − [a].
                dim_bnd.push(list);
            }
            boundaries.push(dim_bnd);
        }
        Ok(Self {
            counts,
            boundaries,
            simplices: Some(simplices),
        })
    }

    pub fn dimension(&self) -> usize {
        self.counts.len().saturating_sub(1)
    }

    /// Number of cells in dimension d (0 above the top dimension).
    pub fn count(&self, d: usize) -> usize {
        self.counts.get(d).copied().unwrap_or(0)
    }

    pub fn is_simplicial(&self) -> bool {
        self.simplices.is_some()
    }

    pub fn simplices(&self) -> Option<&Vec<Vec<Vec<usize>>>> {
        self.simplices.as_ref()
    }

    /// Ordered incidence list of cell `c` in dimension `d` (d ≥ 1).
    pub fn boundary_of(&self, d: usize, c: usize) -> &[Incidence] {
        &self.boundaries[d - 1][c]
    }

    /// Head and tail vertex of a 1-cell.
    pub fn edge_endpoints(&self, e: usize) -> Result<(usize, usize), ComplexError> {
        let list = self.boundary_of(1, e);
        let head = list.iter().find(|(_, c)| *c == 1);
        let tail = list.iter().find(|(_, c)| *c == -1);
        match (list.len(), head, tail) {
            (2, Some(&(h, _)), Some(&(t, _))) => Ok((h, t)),
            _ => Err(ComplexError::BadOneCellBoundary(e)),
        }
    }

    /// Collapsed integer boundary matrix ∂_d as (rows = (d−1)-cells,
    /// cols = d-cells).
    pub fn integer_boundary(&self, d: usize) -> Vec<Vec<i64>> {
        let rows = self.count(d - 1);
        let cols = self.count(d);
        let mut m = vec![vec![0i64; cols]; rows];
        if d >= 1 && d <= self.dimension() {
            for c in 0..cols {
                for &(f, coeff) in self.boundary_of(d, c) {
                    m[f][c] += coeff;
                }
            }
        }
        m
    }

    /// Structural checks: incidence ranges, 1-cell head/tail form,
    /// ∂∂ = 0 over ℤ, and simplicial face consistency when present.
    pub fn validate(&self) -> Result<(), ComplexError> {
        for d in 1..=self.dimension() {
            for c in 0..self.count(d) {
                for &(f, _) in self.boundary_of(d, c) {
                    if f >= self.count(d - 1) {
                        return Err(ComplexError::FaceOutOfRange { dim: d, cell: c, face: f });
                    }
                }
            }
        }
        for e in 0..self.count(1) {
            self.edge_endpoints(e)?;
        }
        if !self.is_simplicial() {
            for c in 0..self.count(2) {
                if self.boundary_of(2, c).iter().any(|(_, s)| s.abs() != 1) {
                    return Err(ComplexError::BadAttachingWord(c));
                }
            }
        }
        for d in 2..=self.dimension() {
            let upper = self.integer_boundary(d);
            let lower = self.integer_boundary(d - 1);
            for c in 0..self.count(d) {
                for r in 0..self.count(d - 2) {
                    let mut acc = 0i64;
                    for k in 0..self.count(d - 1) {
                        acc += lower[r][k] * upper[k][c];
                    }
                    if acc != 0 {
                        return Err(ComplexError::BoundaryComposition(d, d - 1));
                    }
                }
            }
        }
        if let Some(simps) = &self.simplices {
            for (d, dim_cells) in simps.iter().enumerate() {
                if dim_cells.len() != self.count(d) {
                    return Err(ComplexError::SimplicialInconsistency { dim: d, cell: 0 });
                }
                for (cell, verts) in dim_cells.iter().enumerate() {
                    if verts.len() != d + 1 || verts.windows(2).any(|w| w[0] >= w[1]) {
                        return Err(ComplexError::SimplicialInconsistency { dim: d, cell });
                    }
                }
            }
        }
        Ok(())
    }

    /// Checks the cocycle condition of ξ on every 2-cell.
    pub fn check_cocycle(&self, xi: &IntegerCocycle) -> Result<(), ComplexError> {
        if xi.values.len() != self.count(1) {
            return Err(ComplexError::CocycleLength {
                expected: self.count(1),
                got: xi.values.len(),
            });
        }
        for c in 0..self.count(2) {
            let sum: i64 = self
                .boundary_of(2, c)
                .iter()
                .map(|&(e, s)| s * xi.values[e])
                .sum();
            if sum != 0 {
                return Err(ComplexError::NotACocycle(c));
            }
        }
        Ok(())
    }
}

#[derive(Deserialize)]
struct ComplexFile {
    cells: Option<Vec<usize>>,
    /// Per dimension d = 1..D, a flat list of [cell, face, coefficient];
    /// order within one cell is significant (attaching word).
    boundary: Option<Vec<Vec<(usize, usize, i64)>>>,
    simplices: Option<Vec<Vec<Vec<usize>>>>,
    cocycle: Option<Vec<i64>>,
}

/// Parses the complex JSON format. Returns the complex and the cocycle
/// (zero when the file omits one).
pub fn parse_complex_json(text: &str) -> Result<(CellComplex, IntegerCocycle), ComplexError> {
    let file: ComplexFile =
        serde_json::from_str(text).map_err(|e| ComplexError::Format(e.to_string()))?;
    let complex = match (&file.simplices, &file.cells, &file.boundary) {
        (Some(simps), _, _) => CellComplex::from_simplices(simps.clone())?,
        (None, Some(cells), boundary) => {
            let mut boundaries: Vec<Vec<Vec<Incidence>>> = Vec::new();
            for d in 1..cells.len() {
                let mut dim_bnd: Vec<Vec<Incidence>> = vec![Vec::new(); cells[d]];
                if let Some(b) = boundary {
                    if let Some(triples) = b.get(d - 1) {
                        for &(cell, face, coeff) in triples {
                            if cell >= cells[d] {
                                return Err(ComplexError::Format(format!(
                                    "cell index {cell} out of range in dimension {d}"
                                )));
                            }
                            dim_bnd[cell].push((face, coeff));
                        }
                    }
                }
                boundaries.push(dim_bnd);
            }
            CellComplex::new(cells.clone(), boundaries)
        }
        _ => {
            return Err(ComplexError::Format(
                "complex file needs either `simplices` or `cells`+`boundary`".into(),
            ))
        }
    };
    complex.validate()?;
    let cocycle = match file.cocycle {
        Some(values) => IntegerCocycle::new(values),
        None => IntegerCocycle::zero(complex.count(1)),
    };
    complex.check_cocycle(&cocycle)?;
    Ok((complex, cocycle))
}
