use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::AttributedGraph;
use crate::rng;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Path,
    Cycle,
    Star,
    Complete,
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "path" => Ok(Family::Path),
            "cycle" => Ok(Family::Cycle),
            "star" => Ok(Family::Star),
            "complete" => Ok(Family::Complete),
            other => Err(Error::param(format!("unknown family `{other}`"))),
        }
    }
}

/// Path `0-1-...-(n-1)`, cycle closing `(n-1, 0)`, star centred at 0, or `K_n`.
pub fn gen_family(kind: Family, n: usize) -> Result<AttributedGraph> {
    let min = if kind == Family::Cycle { 3 } else { 2 };
    if n < min {
        return Err(Error::param(format!("{kind:?} needs n >= {min}, got {n}")));
    }
    let edges: Vec<(usize, usize)> = match kind {
        Family::Path => (1..n).map(|v| (v - 1, v)).collect(),
        Family::Cycle => (1..n).map(|v| (v - 1, v)).chain([(0, n - 1)]).collect(),
        Family::Star => (1..n).map(|v| (0, v)).collect(),
        Family::Complete => (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect(),
    };
    AttributedGraph::new(n, edges)
}

/// `G(n, p)`: pairs visited in lexicographic order, one uniform draw each.
pub fn gen_erdos_renyi(n: usize, p: f64, seed: u64) -> Result<AttributedGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = rng::seeded(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    AttributedGraph::new(n, edges)
}

/// Connected graph with exactly `m` edges: a random recursive spanning tree
/// plus `m - (n - 1)` uniformly chosen extra pairs.
pub fn gen_random_connected(n: usize, m: usize, seed: u64) -> Result<AttributedGraph> {
    if n == 0 {
        return Err(Error::param("n must be positive"));
    }
    let max = n * (n - 1) / 2;
    if m + 1 < n || m > max {
        return Err(Error::param(format!("m = {m} outside [{}, {max}] for n = {n}", n - 1)));
    }
    let mut rng = rng::seeded(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut present = vec![false; n * n];
    let mut edges = Vec::with_capacity(m);
    for i in 1..n {
        let u = order[i];
        let v = order[rng.gen_range(0..i)];
        present[u * n + v] = true;
        present[v * n + u] = true;
        edges.push((u, v));
    }
    let mut rest: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|&(u, v)| !present[u * n + v])
        .collect();
    rest.shuffle(&mut rng);
    edges.extend(rest.into_iter().take(m + 1 - n));
    AttributedGraph::new(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::metrics;

    #[test]
    fn families_match_definitions() {
        let p4 = gen_family(Family::Path, 4).unwrap();
        assert_eq!((p4.n(), p4.m(), metrics(&p4).diameter), (4, 3, Some(3)));
        let c6 = gen_family(Family::Cycle, 6).unwrap();
        assert_eq!((c6.n(), c6.m(), metrics(&c6).diameter), (6, 6, Some(3)));
        let k3 = gen_family(Family::Complete, 3).unwrap();
        assert_eq!((k3.m(), metrics(&k3).diameter), (3, Some(1)));
        let s = gen_family(Family::Star, 5).unwrap();
        assert_eq!(s.degree(0), 4);
    }

    #[test]
    fn invalid_sizes_rejected() {
        assert!(gen_family(Family::Cycle, 2).is_err());
        assert!(gen_family(Family::Path, 1).is_err());
        assert!(gen_erdos_renyi(4, 1.5, 0).is_err());
    }

    #[test]
    fn erdos_renyi_extremes() {
        assert_eq!(gen_erdos_renyi(4, 0.0, 9).unwrap().m(), 0);
        assert_eq!(gen_erdos_renyi(4, 1.0, 9).unwrap().m(), 6);
    }

    #[test]
    fn erdos_renyi_edge_count_is_binomial() {
        // Binomial(1225, 0.1): mean 122.5, sd 10.5; the mean of 100 draws has sd 1.05.
        let total: usize = (1..=100).map(|s| gen_erdos_renyi(50, 0.1, s).unwrap().m()).sum();
        let mean = total as f64 / 100.0;
        let sd_of_mean = (1225.0f64 * 0.1 * 0.9).sqrt() / 10.0;
        assert!((mean - 122.5).abs() <= 3.0 * sd_of_mean, "mean {mean}");
    }

    #[test]
    fn erdos_renyi_is_reproducible() {
        let a = gen_erdos_renyi(40, 0.2, 77).unwrap();
        let b = gen_erdos_renyi(40, 0.2, 77).unwrap();
        assert_eq!(a.edges(), b.edges());
        assert_ne!(a.edges(), gen_erdos_renyi(40, 0.2, 78).unwrap().edges());
    }

    #[test]
    fn random_connected_has_exact_size() {
        for (n, m) in [(1, 0), (2, 1), (10, 9), (10, 45), (16, 40)] {
            let g = gen_random_connected(n, m, 5).unwrap();
            assert_eq!(g.m(), m);
            assert!(metrics(&g).diameter.is_some());
        }
        assert!(gen_random_connected(5, 11, 0).is_err());
    }
}
