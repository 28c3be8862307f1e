use rand::Rng as _;

use super::{AttributedGraph, Word};
use crate::rng;
use crate::{Error, Result};

/// Value of the trailing feature column on the node added by [`add_virtual_node`].
pub const VIRTUAL_MARKER: Word = 1;

pub const DEFAULT_TUPLE_BUDGET: TupleBudget = TupleBudget {
    max_tuples: 1_000_000,
    max_edges: 20_000_000,
};

/// Size caps for tuple-indexed constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TupleBudget {
    pub max_tuples: usize,
    pub max_edges: usize,
}

impl Default for TupleBudget {
    fn default() -> Self {
        DEFAULT_TUPLE_BUDGET
    }
}

impl TupleBudget {
    /// `n^k`, or a resource error when it exceeds the cap.
    pub fn tuples(&self, n: usize, k: usize) -> Result<usize> {
        if k == 0 {
            return Err(Error::param("tuple order k must be at least 1"));
        }
        let count = u32::try_from(k)
            .ok()
            .and_then(|k| n.checked_pow(k))
            .filter(|&c| c <= self.max_tuples);
        count.ok_or_else(|| {
            Error::Resource(format!("{n}^{k} tuples exceed the budget of {}", self.max_tuples))
        })
    }
}

/// Appends node `n` adjacent to every original node. A trailing feature
/// column is added: [`VIRTUAL_MARKER`] on the new node, 0 elsewhere.
pub fn add_virtual_node(g: &AttributedGraph) -> AttributedGraph {
    let n = g.n();
    let edges = g.edges().iter().copied().chain((0..n).map(|u| (u, n)));
    let mut h = AttributedGraph::new(n + 1, edges).expect("virtual node edges are fresh");
    let width = g.feature_width();
    let mut features: Vec<Vec<Word>> = g
        .features()
        .iter()
        .map(|f| f.iter().copied().chain([0]).collect())
        .collect();
    features.push(std::iter::repeat(0).take(width).chain([VIRTUAL_MARKER]).collect());
    h.set_features_unchecked(features);
    if let Some(labels) = g.labels() {
        let mut labels = labels.to_vec();
        labels.push(n as Word);
        h = h.with_labels(labels).expect("label count matches");
    }
    h.set_virtual(Vec::new(), Some(n));
    h
}

/// Overlay probability `min(1, (1/2 + delta) log2(n) / n)`.
pub fn overlay_probability(n: usize, delta: f64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    ((0.5 + delta) * (n as f64).log2() / n as f64).min(1.0)
}

/// Union of `g` with a `G(n, p)` overlay; overlay-only pairs are flagged virtual.
pub fn add_virtual_edges(g: &AttributedGraph, delta: f64, seed: u64) -> Result<AttributedGraph> {
    if !(delta > 0.0) {
        return Err(Error::param(format!("delta must be positive, got {delta}")));
    }
    let n = g.n();
    let p = overlay_probability(n, delta);
    let mut rng = rng::split(seed, 1);
    let mut overlay = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p && !g.has_edge(u, v) {
                overlay.push((u, v));
            }
        }
    }
    let mut h = AttributedGraph::new(n, g.edges().iter().copied().chain(overlay.iter().copied()))?;
    h.set_features_unchecked(g.features().to_vec());
    if let Some(labels) = g.labels() {
        h = h.with_labels(labels.to_vec())?;
    }
    h.set_virtual(overlay, g.virtual_node());
    h.mark_overlay();
    Ok(h)
}

/// Sets `labels[u] = u`.
pub fn assign_unique_ids(g: &AttributedGraph) -> AttributedGraph {
    g.clone()
        .with_labels((0..g.n() as Word).collect())
        .expect("label count matches")
}

/// Graph on `V^k` (tuple `t` has index `sum t_i n^(k-1-i)`) whose edges join
/// tuples differing in exactly one coordinate. Features concatenate the
/// coordinates' base features.
pub fn build_ktuple_graph(g: &AttributedGraph, k: usize, budget: TupleBudget) -> Result<AttributedGraph> {
    let n = g.n();
    let tuples = budget.tuples(n, k)?;
    let edge_count = tuples * k * n.saturating_sub(1) / 2;
    if edge_count > budget.max_edges {
        return Err(Error::Resource(format!(
            "{edge_count} tuple-graph edges exceed the budget of {}",
            budget.max_edges
        )));
    }
    let mut edges = Vec::with_capacity(edge_count);
    let mut features = Vec::with_capacity(tuples);
    let mut coords = vec![0usize; k];
    for t in 0..tuples {
        decode_tuple(t, n, &mut coords);
        features.push(coords.iter().flat_map(|&c| g.features()[c].iter().copied()).collect());
        let mut stride = 1;
        for i in (0..k).rev() {
            let base = t - coords[i] * stride;
            for c in coords[i] + 1..n {
                edges.push((t, base + c * stride));
            }
            stride *= n;
        }
    }
    let mut h = AttributedGraph::new(tuples, edges)?;
    h.set_features_unchecked(features);
    Ok(h)
}

/// Coordinates of tuple index `t` (most significant first).
pub(crate) fn decode_tuple(mut t: usize, n: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = t % n;
        t /= n;
    }
}
