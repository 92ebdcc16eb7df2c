//! Ready-made complexes used by tests, benchmarks and the asset files.

use super::cell::{CellComplex, IntegerCocycle};

/// S¹ as one vertex and one loop edge, with ξ the generator of H¹.
pub fn cw_circle() -> (CellComplex, IntegerCocycle) {
    let x = CellComplex::new(vec![1, 1], vec![vec![vec![(0, 1), (0, -1)]]]);
    (x, IntegerCocycle::new(vec![1]))
}

/// T² as one vertex, edges a and b, and a 2-cell attached along
/// a b a⁻¹ b⁻¹; ξ is dual to a.
pub fn cw_torus() -> (CellComplex, IntegerCocycle) {
    let x = CellComplex::new(
        vec![1, 2, 1],
        vec![
            vec![vec![(0, 1), (0, -1)], vec![(0, 1), (0, -1)]],
            vec![vec![(0, 1), (1, 1), (0, -1), (1, -1)]],
        ],
    );
    (x, IntegerCocycle::new(vec![1, 0]))
}

/// S¹ triangulated as the boundary of a triangle, with a generating ξ.
pub fn simplicial_circle() -> (CellComplex, IntegerCocycle) {
    let x = CellComplex::from_simplices(vec![
        vec![vec![0], vec![1], vec![2]],
        vec![vec![0, 1], vec![1, 2], vec![0, 2]],
    ])
    .unwrap();
    // the loop 0→1→2→0 evaluates to 1+0−0
    (x, IntegerCocycle::new(vec![1, 0, 0]))
}

/// T² as the standard 3×3 grid triangulation: 9 vertices, 27 edges,
/// 18 triangles; ξ measures displacement along the first coordinate.
pub fn simplicial_torus() -> (CellComplex, IntegerCocycle) {
    let x = grid_torus();
    let xi = torus_grid_cocycle(&x, 0);
    (x, xi)
}

fn grid_torus() -> CellComplex {
    let v = |i: usize, j: usize| 3 * (j % 3) + (i % 3);
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut triangles: Vec<Vec<usize>> = Vec::new();
    for j in 0..3 {
        for i in 0..3 {
            for pair in [
                [v(i, j), v(i + 1, j)],
                [v(i, j), v(i, j + 1)],
                [v(i, j), v(i + 1, j + 1)],
            ] {
                let mut e = pair.to_vec();
                e.sort_unstable();
                edges.push(e);
            }
            for tri in [
                [v(i, j), v(i + 1, j), v(i + 1, j + 1)],
                [v(i, j), v(i, j + 1), v(i + 1, j + 1)],
            ] {
                let mut t = tri.to_vec();
                t.sort_unstable();
                triangles.push(t);
            }
        }
    }
    let vertices = (0..9).map(|k| vec![k]).collect();
    CellComplex::from_simplices(vec![vertices, edges, triangles]).unwrap()
}

/// Seam representative of the generator dual to one grid direction:
/// ±1 exactly on the edges that wrap around (coordinate jump ±2 on the
/// 3×3 grid), so any loop once around that direction has holonomy 1.
pub fn torus_grid_cocycle(x: &CellComplex, axis: usize) -> IntegerCocycle {
    let coord = |v: usize| {
        if axis == 0 {
            (v % 3) as i64
        } else {
            (v / 3) as i64
        }
    };
    let values = x
        .simplices()
        .unwrap()[1]
        .iter()
        .map(|e| match coord(e[1]) - coord(e[0]) {
            2 => -1,
            -2 => 1,
            _ => 0,
        })
        .collect();
    IntegerCocycle::new(values)
}

/// S² as the boundary of the 3-simplex.
pub fn simplicial_sphere() -> CellComplex {
    CellComplex::from_simplices(vec![
        (0..4).map(|k| vec![k]).collect(),
        vec![
            vec![0, 1],
            vec![0, 2],
            vec![0, 3],
            vec![1, 2],
            vec![1, 3],
            vec![2, 3],
        ],
        vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]],
    ])
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builders_validate() {
        for (x, xi) in [cw_circle(), cw_torus(), simplicial_circle(), simplicial_torus()] {
            x.validate().unwrap();
            x.check_cocycle(&xi).unwrap();
        }
        simplicial_sphere().validate().unwrap();
    }

    #[test]
    fn grid_torus_counts_and_euler() {
        let (x, _) = simplicial_torus();
        assert_eq!((x.count(0), x.count(1), x.count(2)), (9, 27, 18));
        assert_eq!(x.count(0) as i64 - x.count(1) as i64 + x.count(2) as i64, 0);
    }

    #[test]
    fn second_axis_cocycle_is_valid() {
        let (x, _) = simplicial_torus();
        x.check_cocycle(&torus_grid_cocycle(&x, 1)).unwrap();
    }

    #[test]
    fn sphere_euler_is_two() {
        let x = simplicial_sphere();
        assert_eq!(x.count(0) as i64 - x.count(1) as i64 + x.count(2) as i64, 2);
    }
}
