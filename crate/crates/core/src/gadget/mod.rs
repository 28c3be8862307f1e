//! Two-party equality gadget: a graph whose WL refinement separates the two
//! halves exactly when the halves encode different bitstrings.
//!
//! Each side has a hub `x`, `ceil(m/n)` nodes `w_i` joined to the hub, and a
//! path `u_1 .. u_n v_n .. v_1`. Bit `k` with `(i, j) = pair_of(k)` joins
//! `w_i` to `u_j` when 0 and to `v_j` when 1. The hubs are joined directly
//! or through a path of `path_len` extra nodes.

mod scan;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{AttributedGraph, Word};
use crate::wl::{verify_wl_coloring, ColorVector};
use crate::{rng, Error, Result};

pub use scan::{gadget_round_scan, trend_violations, ScanRow};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetSpec {
    pub n: usize,
    pub m: usize,
    pub a: Vec<bool>,
    pub b: Vec<bool>,
    /// Extra nodes between the two hubs; 0 keeps the direct hub edge.
    #[serde(default)]
    pub path_len: usize,
}

/// Parses a string of `0`/`1` characters.
pub fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::param(format!("bitstring contains {other:?}"))),
        })
        .collect()
}

pub fn format_bits(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

impl GadgetSpec {
    pub fn new(n: usize, m: usize, a: Vec<bool>, b: Vec<bool>) -> Result<Self> {
        let spec = GadgetSpec { n, m, a, b, path_len: 0 };
        spec.validate()?;
        Ok(spec)
    }

    /// Random bitstrings drawn from `seed`; `b = a` when `equal`.
    pub fn random(n: usize, m: usize, equal: bool, seed: u64) -> Result<Self> {
        let mut rng = rng::seeded(seed);
        let a: Vec<bool> = (0..m).map(|_| rng.gen()).collect();
        let b = if equal { a.clone() } else { (0..m).map(|_| rng.gen()).collect() };
        Self::new(n, m, a, b)
    }

    pub fn with_path_len(mut self, path_len: usize) -> Self {
        self.path_len = path_len;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.m < self.n || self.m > self.n * self.n {
            return Err(Error::param(format!("need n >= 1 and n <= m <= n^2, got n = {}, m = {}", self.n, self.m)));
        }
        if self.a.len() != self.m || self.b.len() != self.m {
            return Err(Error::param(format!(
                "bitstrings must have length m = {}, got {} and {}",
                self.m,
                self.a.len(),
                self.b.len()
            )));
        }
        Ok(())
    }

    /// Number of `w` nodes per side, `ceil(m / n)`.
    pub fn groups(&self) -> usize {
        self.m.div_ceil(self.n)
    }

    pub fn node_count(&self) -> usize {
        4 * self.n + 2 * self.groups() + 2 + self.path_len
    }

    pub fn edge_count(&self) -> usize {
        2 * (2 * self.n - 1) + 2 * self.groups() + 1 + 2 * self.m + self.path_len
    }
}

/// 1-based bit index `k` to its 1-based `(group, column)` pair.
pub fn pair_of(k: usize, n: usize) -> (usize, usize) {
    (k.div_ceil(n), (k - 1) % n + 1)
}

/// Inverse of [`pair_of`].
pub fn index_of((i, j): (usize, usize), n: usize) -> usize {
    (i - 1) * n + j
}

/// Node indices by role; index 0 is Alice's side, 1 is Bob's.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Roles {
    pub x: [usize; 2],
    pub w: [Vec<usize>; 2],
    pub u: [Vec<usize>; 2],
    pub v: [Vec<usize>; 2],
    pub path: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GadgetGraph {
    pub spec: GadgetSpec,
    /// Carries IDs `0..N` so CONGEST algorithms can run on it directly.
    pub graph: AttributedGraph,
    pub roles: Roles,
    pub colors: ColorVector,
}

impl GadgetGraph {
    /// Reads the JSON form written by serde, restoring the graph's
    /// adjacency and re-checking its invariants.
    pub fn read_json(reader: impl std::io::Read) -> Result<Self> {
        let gg: GadgetGraph = serde_json::from_reader(reader)?;
        gg.spec.validate()?;
        let graph = gg.graph.finish_loaded()?;
        gg.colors.check(graph.n())?;
        Ok(GadgetGraph { graph, ..gg })
    }
}

/// Builds the gadget. Node order: both hubs, Alice's then Bob's `w`, then
/// `u^A, v^A, u^B, v^B`, then the hub path.
pub fn build_eq_gadget(spec: &GadgetSpec) -> Result<GadgetGraph> {
    spec.validate()?;
    let (n, groups) = (spec.n, spec.groups());
    let mut next = 2;
    let mut block = |len: usize| {
        let ids: Vec<usize> = (next..next + len).collect();
        next += len;
        ids
    };
    let w = [block(groups), block(groups)];
    let (u_a, v_a) = (block(n), block(n));
    let (u_b, v_b) = (block(n), block(n));
    let path = block(spec.path_len);
    let roles = Roles { x: [0, 1], w, u: [u_a, u_b], v: [v_a, v_b], path };

    let mut edges = Vec::with_capacity(spec.edge_count());
    let mut hub_chain = vec![roles.x[0]];
    hub_chain.extend(&roles.path);
    hub_chain.push(roles.x[1]);
    edges.extend(hub_chain.windows(2).map(|p| (p[0], p[1])));
    for side in 0..2 {
        let (u, v) = (&roles.u[side], &roles.v[side]);
        edges.extend(roles.w[side].iter().map(|&wi| (roles.x[side], wi)));
        edges.extend(u.windows(2).map(|p| (p[0], p[1])));
        edges.extend(v.windows(2).map(|p| (p[0], p[1])));
        edges.push((u[n - 1], v[n - 1]));
        let bits = if side == 0 { &spec.a } else { &spec.b };
        for (k, &bit) in bits.iter().enumerate() {
            let (i, j) = pair_of(k + 1, n);
            let target = if bit { v[j - 1] } else { u[j - 1] };
            edges.push((roles.w[side][i - 1], target));
        }
    }
    let total = spec.node_count();
    let graph = AttributedGraph::new(total, edges)?.with_labels((0..total as Word).collect())?;

    let mut colors = vec![0; total];
    for side in 0..2 {
        for j in 0..n {
            colors[roles.u[side][j]] = (j + 1) as Word;
            colors[roles.v[side][j]] = (n + j + 1) as Word;
        }
        for (i, &wi) in roles.w[side].iter().enumerate() {
            colors[wi] = (2 * n + i + 1) as Word;
        }
    }
    Ok(GadgetGraph { spec: spec.clone(), graph, roles, colors: ColorVector(colors) })
}

/// Whether every pair `w^A_i, w^B_i` got the same color under `y`, which
/// must be a valid WL refinement of the gadget's initial colors.
pub fn verify_gadget_property(gg: &GadgetGraph, y: &ColorVector) -> Result<bool> {
    if !verify_wl_coloring(&gg.graph, &gg.colors, y)? {
        return Err(Error::input("coloring is not a valid WL refinement of the gadget colors"));
    }
    Ok(gg.roles.w[0].iter().zip(&gg.roles.w[1]).all(|(&a, &b)| y.0[a] == y.0[b]))
}
