//! BFS spanning tree construction by flooding.

use serde::{Deserialize, Serialize};

use crate::graph::{bfs_distances, AttributedGraph, Word};
use crate::sim::{run, NodeContext, NodeProgram, Round, RoundLog, SimConfig, Status};
use crate::{Error, Result};

/// Rooted spanning tree: parent pointers and hop depths.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanningTree {
    pub root: usize,
    /// `None` exactly at the root.
    pub parent: Vec<Option<usize>>,
    pub depth: Vec<usize>,
}

impl SpanningTree {
    pub fn height(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    pub fn children(&self, u: usize) -> Vec<usize> {
        (0..self.parent.len()).filter(|&v| self.parent[v] == Some(u)).collect()
    }

    /// Checks that this is a BFS tree of `g` rooted at `root`.
    pub fn validate(&self, g: &AttributedGraph) -> Result<()> {
        let n = g.n();
        if self.parent.len() != n || self.depth.len() != n || self.root >= n {
            return Err(Error::input("tree size differs from graph"));
        }
        let bfs = bfs_distances(g, self.root);
        for u in 0..n {
            match self.parent[u] {
                None if u == self.root && self.depth[u] == 0 => {}
                Some(p) if u != self.root && g.has_edge(u, p) && self.depth[u] == self.depth[p] + 1 => {}
                _ => return Err(Error::input(format!("bad parent pointer at {u}"))),
            }
            if bfs[u] != Some(self.depth[u]) {
                return Err(Error::input(format!("depth of {u} is not its BFS distance")));
            }
        }
        Ok(())
    }

    /// Tree computed centrally (lowest-ID parent among BFS predecessors),
    /// identical to what [`flood_bfs`] builds.
    pub fn bfs(g: &AttributedGraph, root: usize) -> Result<Self> {
        let dist = bfs_distances(g, root);
        let id = |u: usize| g.labels().map_or(u as Word, |l| l[u]);
        let mut parent = vec![None; g.n()];
        let mut depth = vec![0; g.n()];
        for u in 0..g.n() {
            let d = dist[u].ok_or(Error::Disconnected)?;
            depth[u] = d;
            if u != root {
                parent[u] = g.neighbors(u).iter().copied().filter(|&v| dist[v] == Some(d - 1)).min_by_key(|&v| id(v));
            }
        }
        Ok(SpanningTree { root, parent, depth })
    }
}

struct Flood {
    root: usize,
}

#[derive(Debug, Clone, Default)]
struct FloodState {
    parent: Option<usize>,
    depth: Option<usize>,
}

impl NodeProgram for Flood {
    type State = FloodState;

    fn init(&self, _: &NodeContext<'_>) -> FloodState {
        FloodState::default()
    }

    fn on_round(&self, ctx: &NodeContext<'_>, st: &mut FloodState, round: &mut Round<'_>) -> Status {
        if ctx.index == self.root {
            st.depth = Some(0);
        } else if let Some((from, _)) = round.inbox.iter().min_by_key(|&(v, _)| ctx.neighbor_id(v)) {
            round.meter.charge_n(crate::sim::OpKind::Compare, ctx.degree());
            st.parent = Some(from);
            st.depth = Some(round.number - 1);
        } else {
            return Status::Active;
        }
        let depth = st.depth.expect("joined") as Word;
        for &v in ctx.neighbors {
            round.push(v, depth);
        }
        Status::Halt
    }
}

/// Floods from `root`: a node joins in the round after it first hears from
/// a joined neighbor, choosing the lowest-ID such neighbor as parent, then
/// announces itself and halts. Takes `ecc(root) + 1` rounds.
pub fn flood_bfs(g: &AttributedGraph, root: usize, w: usize) -> Result<(SpanningTree, RoundLog)> {
    if root >= g.n() {
        return Err(Error::param(format!("root {root} out of range")));
    }
    let cfg = SimConfig::new(w).with_max_rounds(g.n() + 2);
    let (states, log) = run(g, &Flood { root }, cfg)?.completed()?;
    let tree = SpanningTree {
        root,
        parent: states.iter().map(|s| s.parent).collect(),
        depth: states.iter().map(|s| s.depth.expect("completed flood reaches all")).collect(),
    };
    Ok((tree, log))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{eccentricity, gen_erdos_renyi, gen_family, largest_component, Family};

    #[test]
    fn path_from_end() {
        let g = gen_family(Family::Path, 9).unwrap();
        let (t, log) = flood_bfs(&g, 0, 1).unwrap();
        assert_eq!(t.height(), 8);
        assert_eq!(log.rounds, 9);
        t.validate(&g).unwrap();
    }

    #[test]
    fn complete_and_cycle() {
        let k = gen_family(Family::Complete, 6).unwrap();
        let (t, log) = flood_bfs(&k, 3, 1).unwrap();
        assert_eq!(t.height(), 1);
        assert!(log.rounds <= 2);
        let c = gen_family(Family::Cycle, 8).unwrap();
        assert_eq!(flood_bfs(&c, 5, 1).unwrap().0.height(), 4);
    }

    #[test]
    fn random_graphs_match_central_bfs() {
        for seed in 0..30 {
            let g = largest_component(&gen_erdos_renyi(40, 0.08, seed).unwrap());
            let root = seed as usize % g.n();
            let (t, log) = flood_bfs(&g, root, 1).unwrap();
            t.validate(&g).unwrap();
            assert_eq!(t, SpanningTree::bfs(&g, root).unwrap());
            assert!(log.rounds <= eccentricity(&g, root).unwrap() + 1);
        }
    }

    #[test]
    fn disconnected_times_out() {
        let g = AttributedGraph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert!(matches!(flood_bfs(&g, 0, 1), Err(Error::Timeout { .. })));
    }
}
