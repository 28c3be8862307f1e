//! Frozen round-bound constants. Tests fail if measured rounds exceed them.

use crate::graph::{metrics, AttributedGraph};

/// `a·D + b·ceil(m / w) + c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinearBound {
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

impl LinearBound {
    pub fn eval(&self, diameter: usize, m: usize, w: usize) -> usize {
        self.a * diameter + self.b * m.div_ceil(w) + self.c
    }
}

pub const WL_CONGEST: LinearBound = LinearBound { a: 3, b: 2, c: 8 };

pub const GLOBAL_COMPUTE: LinearBound = LinearBound { a: 3, b: 4, c: 12 };

/// `b'·ceil(Δ / w) + c'` for the virtual-node algorithm.
pub const VNODE_SLOPE: usize = 2;
pub const VNODE_OFFSET: usize = 6;

/// Slack over `ecc(root)` for flooding, and over `depth + ceil(M / w)` for casts.
pub const FLOOD_SLACK: usize = 1;
pub const CAST_SLACK: usize = 2;

pub fn wl_congest_bound(g: &AttributedGraph, w: usize) -> usize {
    WL_CONGEST.eval(metrics(g).diameter.unwrap_or(0), g.m(), w)
}

pub fn global_compute_bound(g: &AttributedGraph, w: usize) -> usize {
    GLOBAL_COMPUTE.eval(metrics(g).diameter.unwrap_or(0), g.m(), w)
}

/// Bound for the virtual-node algorithm given the original graph's max degree.
pub fn vnode_bound(max_degree: usize, w: usize) -> usize {
    VNODE_SLOPE * max_degree.div_ceil(w) + VNODE_OFFSET
}
