use std::collections::BTreeMap;

use super::{dense_ranks, partition_of, ColorVector};
use crate::graph::{AttributedGraph, Word};
use crate::Result;

/// Own color and sorted neighbor colors; derived `Ord` is the lexicographic
/// order over `(own, neigh)` used for ranking.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WlType {
    pub own: Word,
    pub neigh: Vec<Word>,
}

/// Types over non-overlay edges.
pub fn wl_types(g: &AttributedGraph, x: &ColorVector) -> Result<Vec<WlType>> {
    x.check(g.n())?;
    Ok((0..g.n())
        .map(|u| {
            let mut neigh: Vec<Word> = g.original_neighbors(u).map(|v| x.0[v]).collect();
            neigh.sort_unstable();
            WlType { own: x.0[u], neigh }
        })
        .collect())
}

/// One refinement step: each node's new color is the dense rank of its type.
pub fn wl_step_reference(g: &AttributedGraph, x: &ColorVector) -> Result<ColorVector> {
    Ok(ColorVector(dense_ranks(&wl_types(g, x)?)))
}

/// `y_u = y_v` iff `u` and `v` have equal types, for every pair.
pub fn verify_wl_coloring(g: &AttributedGraph, x: &ColorVector, y: &ColorVector) -> Result<bool> {
    y.check(g.n())?;
    let types = wl_types(g, x)?;
    let mut by_type: BTreeMap<&WlType, Word> = BTreeMap::new();
    for (t, &c) in types.iter().zip(&y.0) {
        if *by_type.entry(t).or_insert(c) != c {
            return Ok(false);
        }
    }
    let mut colors: Vec<Word> = by_type.values().copied().collect();
    colors.sort_unstable();
    let classes = colors.len();
    colors.dedup();
    Ok(colors.len() == classes)
}

/// Steps until the induced partition stops changing. Returns the last output
/// and the number of steps taken, including the confirming one.
pub fn wl_refine_stable(g: &AttributedGraph, x: &ColorVector) -> Result<(ColorVector, usize)> {
    let mut current = x.clone();
    let mut iterations = 0;
    loop {
        let next = wl_step_reference(g, &current)?;
        iterations += 1;
        if partition_of(&next.0) == partition_of(&current.0) {
            return Ok((next, iterations));
        }
        current = next;
    }
}

/// Whether stable refinement on the disjoint union separates the two graphs'
/// color histograms.
pub fn wl_distinguishes(
    g1: &AttributedGraph,
    x1: &ColorVector,
    g2: &AttributedGraph,
    x2: &ColorVector,
) -> Result<bool> {
    let union = g1.disjoint_union(g2)?;
    let x = ColorVector(x1.0.iter().chain(&x2.0).copied().collect());
    let (y, _) = wl_refine_stable(&union, &x)?;
    let (a, b) = y.0.split_at(g1.n());
    Ok(super::histogram(a) != super::histogram(b))
}
