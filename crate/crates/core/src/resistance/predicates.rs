use super::ResistanceMatrix;
use crate::graph::AttributedGraph;

/// Tolerance of the locality predicates.
pub const PREDICATE_TOL: f64 = 1e-6;

/// `(u, v)` is a bridge iff `R(u, v) = 1`.
pub fn cut_edge_local(r: &ResistanceMatrix, (u, v): (usize, usize), tol: f64) -> bool {
    (r.get(u, v) - 1.0).abs() <= tol
}

/// `u` is a cut vertex iff two distinct neighbors `s, t` satisfy
/// `R(s,t) = R(s,u) + R(u,t)`.
pub fn cut_vertex_local(g: &AttributedGraph, r: &ResistanceMatrix, u: usize, tol: f64) -> bool {
    let nbrs = g.neighbors(u);
    nbrs.iter().enumerate().any(|(i, &s)| {
        nbrs[i + 1..].iter().any(|&t| (r.get(s, t) - r.get(s, u) - r.get(u, t)).abs() <= tol)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_family, Family};
    use crate::resistance::resistance_matrix;

    #[test]
    fn path_and_cycle() {
        let p4 = gen_family(Family::Path, 4).unwrap();
        let r = resistance_matrix(&p4).unwrap();
        assert!(cut_edge_local(&r, (1, 2), PREDICATE_TOL));
        let p3 = gen_family(Family::Path, 3).unwrap();
        let r3 = resistance_matrix(&p3).unwrap();
        assert!(cut_vertex_local(&p3, &r3, 1, PREDICATE_TOL));
        assert!(!cut_vertex_local(&p3, &r3, 0, PREDICATE_TOL));
        for fam in [Family::Cycle, Family::Complete] {
            let g = gen_family(fam, 4).unwrap();
            let r = resistance_matrix(&g).unwrap();
            assert!(g.edges().iter().all(|&e| !cut_edge_local(&r, e, PREDICATE_TOL)));
            assert!((0..4).all(|u| !cut_vertex_local(&g, &r, u, PREDICATE_TOL)));
        }
        let k4 = resistance_matrix(&gen_family(Family::Complete, 4).unwrap()).unwrap();
        assert!((k4.get(0, 1) - 0.5).abs() < 1e-9);
    }
}
