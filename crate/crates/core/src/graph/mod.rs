//! Undirected simple graphs with per-node word features.

mod generators;
mod io;
mod metrics;
mod transforms;

pub use generators::{gen_erdos_renyi, gen_family, gen_random_connected, Family};
pub use io::{read_graph, read_graph_json, read_graph_text, write_graph_json, write_graph_text, GraphFormat};
pub use metrics::{bfs_distances, connected_components, eccentricity, largest_component, metrics, GraphMetrics};
pub use transforms::{
    add_virtual_edges, add_virtual_node, assign_unique_ids, build_ktuple_graph, overlay_probability, TupleBudget,
    DEFAULT_TUPLE_BUDGET, VIRTUAL_MARKER,
};

pub(crate) use transforms::decode_tuple;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Machine word: colors, IDs, hop distances and message payloads.
pub type Word = i64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttributedGraph {
    n: usize,
    /// Sorted, `u < v`.
    edges: Vec<(usize, usize)>,
    /// Subset of `edges` added as a routing overlay; excluded from WL types.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    virtual_edges: Vec<(usize, usize)>,
    /// Set by `add_virtual_edges`, even when the overlay added no new pair.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    overlay: bool,
    #[serde(default)]
    features: Vec<Vec<Word>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<Word>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    virtual_node: Option<usize>,
    #[serde(skip)]
    adj: Vec<Vec<usize>>,
}

impl AttributedGraph {
    /// Builds a graph on `n` nodes. Rejects self-loops, out-of-range endpoints
    /// and repeated pairs; pairs may be given in either orientation.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::input(format!("edge ({a}, {b}) out of range for n = {n}")));
            }
            if a == b {
                return Err(Error::input(format!("self-loop at node {a}")));
            }
            if !set.insert((a.min(b), a.max(b))) {
                return Err(Error::input(format!("repeated edge ({a}, {b})")));
            }
        }
        let mut g = AttributedGraph {
            n,
            edges: set.into_iter().collect(),
            virtual_edges: Vec::new(),
            features: vec![Vec::new(); n],
            labels: None,
            virtual_node: None,
            overlay: false,
            adj: Vec::new(),
        };
        g.rebuild_adjacency();
        Ok(g)
    }

    pub fn empty(n: usize) -> Self {
        Self::new(n, []).expect("empty graph is valid")
    }

    fn rebuild_adjacency(&mut self) {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        self.adj = adj;
    }

    /// Restores derived state after deserialization and checks all invariants.
    pub(crate) fn finish_loaded(mut self) -> Result<Self> {
        let mut edges: Vec<_> = self.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        edges.sort_unstable();
        self.edges = edges;
        self.virtual_edges.sort_unstable();
        if self.features.is_empty() {
            self.features = vec![Vec::new(); self.n];
        }
        self.rebuild_adjacency();
        self.validate()?;
        Ok(self)
    }

    pub fn with_features(mut self, features: Vec<Vec<Word>>) -> Result<Self> {
        if features.len() != self.n {
            return Err(Error::input(format!(
                "{} feature rows for {} nodes",
                features.len(),
                self.n
            )));
        }
        self.features = features;
        self.validate()?;
        Ok(self)
    }

    pub fn with_labels(mut self, labels: Vec<Word>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::input(format!("{} labels for {} nodes", labels.len(), self.n)));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Checks every structural invariant.
    pub fn validate(&self) -> Result<()> {
        let mut prev = None;
        for &(u, v) in &self.edges {
            if !(u < v && v < self.n) {
                return Err(Error::input(format!("bad edge ({u}, {v})")));
            }
            if prev == Some((u, v)) {
                return Err(Error::input(format!("repeated edge ({u}, {v})")));
            }
            prev = Some((u, v));
        }
        for e in &self.virtual_edges {
            if self.edges.binary_search(e).is_err() {
                return Err(Error::input(format!("virtual edge {e:?} not in edge set")));
            }
        }
        if self.features.len() != self.n {
            return Err(Error::input("feature row count differs from n"));
        }
        if let Some(first) = self.features.first() {
            if self.features.iter().any(|f| f.len() != first.len()) {
                return Err(Error::input("feature vectors differ in length"));
            }
        }
        if let Some(labels) = &self.labels {
            if labels.len() != self.n {
                return Err(Error::input("label count differs from n"));
            }
        }
        if let Some(v) = self.virtual_node {
            if v >= self.n {
                return Err(Error::input("virtual node out of range"));
            }
        }
        let degree_sum: usize = self.adj.iter().map(Vec::len).sum();
        if degree_sum != 2 * self.edges.len() {
            return Err(Error::input("adjacency out of sync with edge set"));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Sorted neighbor list, overlay edges included.
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn features(&self) -> &[Vec<Word>] {
        &self.features
    }

    pub fn feature_width(&self) -> usize {
        self.features.first().map_or(0, Vec::len)
    }

    pub fn labels(&self) -> Option<&[Word]> {
        self.labels.as_deref()
    }

    pub fn virtual_node(&self) -> Option<usize> {
        self.virtual_node
    }

    pub fn has_overlay(&self) -> bool {
        self.overlay
    }

    pub fn virtual_edges(&self) -> &[(usize, usize)] {
        &self.virtual_edges
    }

    pub fn is_virtual_edge(&self, u: usize, v: usize) -> bool {
        self.virtual_edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    /// Neighbors over non-overlay edges.
    pub fn original_neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[u].iter().copied().filter(move |&v| !self.is_virtual_edge(u, v))
    }

    /// Max degree over non-overlay edges.
    pub fn original_max_degree(&self) -> usize {
        (0..self.n).map(|u| self.original_neighbors(u).count()).max().unwrap_or(0)
    }

    /// The graph with overlay edges removed.
    pub fn without_virtual_edges(&self) -> AttributedGraph {
        let mut g = self.clone();
        g.edges.retain(|&(u, v)| self.virtual_edges.binary_search(&(u, v)).is_err());
        g.virtual_edges.clear();
        g.overlay = false;
        g.rebuild_adjacency();
        g
    }

    /// Induced subgraph on `nodes` (relabelled in the given order); features
    /// and labels follow their nodes.
    pub fn induced(&self, nodes: &[usize]) -> AttributedGraph {
        let mut index = vec![usize::MAX; self.n];
        for (i, &u) in nodes.iter().enumerate() {
            index[u] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|&(u, v)| (index[u], index[v]));
        let mut g = AttributedGraph::new(nodes.len(), edges).expect("induced subgraph is simple");
        g.features = nodes.iter().map(|&u| self.features[u].clone()).collect();
        g.labels = self.labels.as_ref().map(|l| nodes.iter().map(|&u| l[u]).collect());
        g.virtual_edges = self
            .virtual_edges
            .iter()
            .filter(|&&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|&(u, v)| (index[u].min(index[v]), index[u].max(index[v])))
            .collect();
        g.virtual_edges.sort_unstable();
        g
    }

    /// Same graph with node `u` renamed to `perm[u]`.
    pub fn relabeled(&self, perm: &[usize]) -> AttributedGraph {
        let mut inverse = vec![0; self.n];
        for (u, &p) in perm.iter().enumerate() {
            inverse[p] = u;
        }
        let mut g = AttributedGraph::new(self.n, self.edges.iter().map(|&(u, v)| (perm[u], perm[v])))
            .expect("relabeling preserves simplicity");
        g.features = inverse.iter().map(|&u| self.features[u].clone()).collect();
        g.labels = self.labels.as_ref().map(|l| inverse.iter().map(|&u| l[u]).collect());
        g
    }

    /// Disjoint union; nodes of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &AttributedGraph) -> Result<AttributedGraph> {
        if self.feature_width() != other.feature_width() && self.n > 0 && other.n > 0 {
            return Err(Error::input("feature widths differ"));
        }
        let shift = self.n;
        let edges = self
            .edges
            .iter()
            .copied()
            .chain(other.edges.iter().map(|&(u, v)| (u + shift, v + shift)));
        let mut g = AttributedGraph::new(self.n + other.n, edges)?;
        g.features = self.features.iter().chain(&other.features).cloned().collect();
        Ok(g)
    }

    pub(crate) fn set_virtual(&mut self, virtual_edges: Vec<(usize, usize)>, virtual_node: Option<usize>) {
        self.virtual_edges = virtual_edges;
        self.virtual_edges.sort_unstable();
        self.virtual_node = virtual_node;
    }

    pub(crate) fn mark_overlay(&mut self) {
        self.overlay = true;
    }

    pub(crate) fn set_features_unchecked(&mut self, features: Vec<Vec<Word>>) {
        self.features = features;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_self_loops_and_repeats() {
        assert!(AttributedGraph::new(3, [(1, 1)]).is_err());
        assert!(AttributedGraph::new(3, [(0, 1), (1, 0)]).is_err());
        assert!(AttributedGraph::new(3, [(0, 3)]).is_err());
    }

    #[test]
    fn adjacency_is_symmetric_and_sorted() {
        let g = AttributedGraph::new(4, [(2, 0), (0, 1), (3, 0)]).unwrap();
        assert_eq!(g.neighbors(0), &[1, 2, 3]);
        assert_eq!(g.neighbors(3), &[0]);
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (0, 3)]);
        g.validate().unwrap();
    }

    #[test]
    fn unequal_feature_lengths_rejected() {
        let g = AttributedGraph::empty(2);
        assert!(g.with_features(vec![vec![1], vec![1, 2]]).is_err());
    }

    #[test]
    fn relabel_maps_edges_and_features() {
        let g = AttributedGraph::new(3, [(0, 1)])
            .unwrap()
            .with_features(vec![vec![10], vec![11], vec![12]])
            .unwrap();
        let h = g.relabeled(&[2, 0, 1]);
        assert!(h.has_edge(2, 0));
        assert_eq!(h.features()[2], vec![10]);
        assert_eq!(h.features()[1], vec![12]);
    }
}
