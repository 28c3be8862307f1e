use std::collections::VecDeque;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::AttributedGraph;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphMetrics {
    pub n: usize,
    pub m: usize,
    /// `None` when the graph is disconnected.
    pub diameter: Option<usize>,
    pub max_degree: usize,
    pub min_degree: usize,
    /// Second-smallest eigenvalue of the normalized Laplacian; 0 if disconnected.
    pub lambda2: f64,
    /// Cheeger lower bound `lambda2 / 2` on conductance.
    pub conductance_lb: f64,
}

/// Hop distances from `src`; `None` for unreachable nodes.
pub fn bfs_distances(g: &AttributedGraph, src: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.n()];
    let mut queue = VecDeque::from([src]);
    dist[src] = Some(0);
    while let Some(u) = queue.pop_front() {
        let d = dist[u].expect("queued nodes are reached");
        for &v in g.neighbors(u) {
            if dist[v].is_none() {
                dist[v] = Some(d + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Largest hop distance from `src`, or `None` if some node is unreachable.
pub fn eccentricity(g: &AttributedGraph, src: usize) -> Option<usize> {
    bfs_distances(g, src).into_iter().try_fold(0, |acc, d| d.map(|d| acc.max(d)))
}

/// Component index per node, components numbered by smallest member.
pub fn connected_components(g: &AttributedGraph) -> Vec<usize> {
    let mut comp = vec![usize::MAX; g.n()];
    let mut next = 0;
    for s in 0..g.n() {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = next;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &v in g.neighbors(u) {
                if comp[v] == usize::MAX {
                    comp[v] = next;
                    stack.push(v);
                }
            }
        }
        next += 1;
    }
    comp
}

/// Induced subgraph on the largest connected component (ties broken by the
/// smallest member); nodes keep their relative order.
pub fn largest_component(g: &AttributedGraph) -> AttributedGraph {
    let comp = connected_components(g);
    let count = comp.iter().copied().max().map_or(0, |c| c + 1);
    let mut sizes = vec![0usize; count];
    for &c in &comp {
        sizes[c] += 1;
    }
    let best = (0..count).max_by_key(|&c| (sizes[c], std::cmp::Reverse(c)));
    let nodes: Vec<usize> = match best {
        Some(b) => (0..g.n()).filter(|&u| comp[u] == b).collect(),
        None => Vec::new(),
    };
    g.induced(&nodes)
}

pub fn metrics(g: &AttributedGraph) -> GraphMetrics {
    let n = g.n();
    let mut diameter = Some(0);
    for s in 0..n {
        diameter = match (diameter, eccentricity(g, s)) {
            (Some(d), Some(e)) => Some(d.max(e)),
            _ => None,
        };
        if diameter.is_none() {
            break;
        }
    }
    let lambda2 = if diameter.is_none() || n < 2 { 0.0 } else { normalized_lambda2(g) };
    GraphMetrics {
        n,
        m: g.m(),
        diameter,
        max_degree: g.max_degree(),
        min_degree: g.min_degree(),
        lambda2,
        conductance_lb: lambda2 / 2.0,
    }
}

fn normalized_lambda2(g: &AttributedGraph) -> f64 {
    let n = g.n();
    let inv_sqrt: Vec<f64> = (0..n).map(|u| 1.0 / (g.degree(u) as f64).sqrt()).collect();
    let mut lap = DMatrix::<f64>::identity(n, n);
    for &(u, v) in g.edges() {
        let w = -inv_sqrt[u] * inv_sqrt[v];
        lap[(u, v)] = w;
        lap[(v, u)] = w;
    }
    let mut eig: Vec<f64> = lap.symmetric_eigenvalues().iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    eig[1].max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_family, Family};

    #[test]
    fn complete_graph_spectrum() {
        for n in 3..9 {
            let m = metrics(&gen_family(Family::Complete, n).unwrap());
            let expected = n as f64 / (n as f64 - 1.0);
            assert!((m.lambda2 - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn cycle_spectrum() {
        for n in 3..12 {
            let m = metrics(&gen_family(Family::Cycle, n).unwrap());
            let expected = 1.0 - (2.0 * std::f64::consts::PI / n as f64).cos();
            assert!((m.lambda2 - expected).abs() < 1e-9, "n={n}");
            assert_eq!(m.diameter, Some(n / 2));
        }
    }

    #[test]
    fn disconnected_graph_has_no_diameter() {
        let g = AttributedGraph::new(4, [(0, 1), (2, 3)]).unwrap();
        let m = metrics(&g);
        assert_eq!(m.diameter, None);
        assert_eq!(m.lambda2, 0.0);
    }

    #[test]
    fn path_diameter() {
        for n in 2..10 {
            assert_eq!(metrics(&gen_family(Family::Path, n).unwrap()).diameter, Some(n - 1));
        }
    }

    #[test]
    fn largest_component_picks_biggest() {
        let g = AttributedGraph::new(6, [(0, 1), (2, 3), (3, 4)]).unwrap();
        let h = largest_component(&g);
        assert_eq!((h.n(), h.m()), (3, 2));
    }
}
