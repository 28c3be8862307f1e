use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::graph::AttributedGraph;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutSets {
    /// `(u, v)` with `u < v`.
    pub bridges: BTreeSet<(usize, usize)>,
    pub articulation: BTreeSet<usize>,
}

/// Bridges and articulation points by DFS low-link, per component.
/// Iterative, so deep paths do not overflow the stack.
pub fn cut_sets_tarjan(g: &AttributedGraph) -> CutSets {
    let n = g.n();
    let mut out = CutSets::default();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut time = 0;
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        let mut root_children = 0;
        // (node, parent, next neighbor index)
        let mut stack: Vec<(usize, Option<usize>, usize)> = vec![(root, None, 0)];
        while let Some(frame) = stack.last_mut() {
            let (u, parent, i) = *frame;
            if let Some(&v) = g.neighbors(u).get(i) {
                frame.2 += 1;
                if Some(v) == parent {
                    continue;
                }
                if disc[v] == usize::MAX {
                    disc[v] = time;
                    low[v] = time;
                    time += 1;
                    if u == root {
                        root_children += 1;
                    }
                    stack.push((v, Some(u), 0));
                } else {
                    low[u] = low[u].min(disc[v]);
                }
                continue;
            }
            stack.pop();
            if let Some(p) = parent {
                low[p] = low[p].min(low[u]);
                if low[u] > disc[p] {
                    out.bridges.insert((p.min(u), p.max(u)));
                }
                if p != root && low[u] >= disc[p] {
                    out.articulation.insert(p);
                }
            }
        }
        if root_children > 1 {
            out.articulation.insert(root);
        }
    }
    out
}
