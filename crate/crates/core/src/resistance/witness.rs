use serde::{Deserialize, Serialize};

use super::cut_sets_tarjan;
use crate::graph::{bfs_distances, gen_family, AttributedGraph, Family};
use crate::Result;

/// Nodes within `radius` hops of either endpoint of `edge`, with the
/// induced subgraph; the endpoints become nodes 0 and 1.
pub fn edge_ball(g: &AttributedGraph, (u, v): (usize, usize), radius: usize) -> AttributedGraph {
    let du = bfs_distances(g, u);
    let dv = bfs_distances(g, v);
    let mut nodes = vec![u, v];
    nodes.extend((0..g.n()).filter(|&x| {
        x != u && x != v && [du[x], dv[x]].iter().flatten().any(|&d| d <= radius)
    }));
    g.induced(&nodes)
}

/// Whether an isomorphism maps node `i` of `a` to node `i` of `b` for
/// every `i < roots`. Backtracking that extends the map along BFS order,
/// so connected graphs with a connected root set are searched cheaply.
pub fn rooted_isomorphic(a: &AttributedGraph, b: &AttributedGraph, roots: usize) -> bool {
    let n = a.n();
    if n != b.n() || a.m() != b.m() || roots > n {
        return false;
    }
    let mut order: Vec<usize> = (0..roots).collect();
    let mut seen = vec![false; n];
    order.iter().for_each(|&r| seen[r] = true);
    let mut head = 0;
    while order.len() < n {
        if head == order.len() {
            let next = (0..n).find(|&x| !seen[x]).expect("unseen node");
            seen[next] = true;
            order.push(next);
        }
        let x = order[head];
        head += 1;
        for &y in a.neighbors(x) {
            if !seen[y] {
                seen[y] = true;
                order.push(y);
            }
        }
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn consistent(a: &AttributedGraph, b: &AttributedGraph, map: &[usize], x: usize, y: usize) -> bool {
        a.degree(x) == b.degree(y)
            && (0..map.len()).all(|z| map[z] == usize::MAX || a.has_edge(x, z) == b.has_edge(y, map[z]))
    }
    fn extend(
        a: &AttributedGraph,
        b: &AttributedGraph,
        order: &[usize],
        depth: usize,
        roots: usize,
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        let Some(&x) = order.get(depth) else { return true };
        let candidates: Vec<usize> = if x < roots {
            vec![x]
        } else {
            // prefer images adjacent to an already-mapped neighbor
            match a.neighbors(x).iter().find(|&&p| map[p] != usize::MAX) {
                Some(&p) => b.neighbors(map[p]).to_vec(),
                None => (0..b.n()).collect(),
            }
        };
        for y in candidates {
            if used[y] || !consistent(a, b, map, x, y) {
                continue;
            }
            map[x] = y;
            used[y] = true;
            if extend(a, b, order, depth + 1, roots, map, used) {
                return true;
            }
            map[x] = usize::MAX;
            used[y] = false;
        }
        false
    }
    extend(a, b, &order, 0, roots, &mut map, &mut used)
}

/// The path/cycle pair whose middle edge's biconnectivity differs although
/// its neighborhoods look alike.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub n: usize,
    pub edge: (usize, usize),
    pub radius: usize,
    pub bridge_in_path: bool,
    pub bridge_in_cycle: bool,
    pub cut_vertex_in_path: bool,
    pub cut_vertex_in_cycle: bool,
    pub balls_isomorphic: bool,
}

/// Compares the edge `(n/2 - 1, n/2)` of `P_n` and `C_n` within
/// `n/2 - 2` hops. Needs `n >= 4`.
pub fn globality_witness(n: usize) -> Result<Witness> {
    if n < 4 {
        return Err(crate::Error::param("witness needs n >= 4"));
    }
    let path = gen_family(Family::Path, n)?;
    let cycle = gen_family(Family::Cycle, n)?;
    let edge = (n / 2 - 1, n / 2);
    let radius = n / 2 - 2;
    let (pc, cc) = (cut_sets_tarjan(&path), cut_sets_tarjan(&cycle));
    let balls_isomorphic = rooted_isomorphic(&edge_ball(&path, edge, radius), &edge_ball(&cycle, edge, radius), 2);
    Ok(Witness {
        n,
        edge,
        radius,
        bridge_in_path: pc.bridges.contains(&edge),
        bridge_in_cycle: cc.bridges.contains(&edge),
        cut_vertex_in_path: pc.articulation.contains(&edge.1),
        cut_vertex_in_cycle: cc.articulation.contains(&edge.1),
        balls_isomorphic,
    })
}
