//! k-WL (all substitutions per coordinate) and k-FWL (joint substitution)
//! over colorings of `V^k`.
//!
//! Joint variants rank several graphs' tuples together so colors are
//! comparable across graphs.

use super::{dense_ranks, partition_of, ColorVector};
use crate::graph::decode_tuple;
use crate::graph::{AttributedGraph, TupleBudget, Word};
use crate::{Error, Result};

/// Color of every `k`-tuple, indexed as in the tuple graph
/// (`index = sum t_i n^(k-1-i)`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleColoring {
    pub n: usize,
    pub k: usize,
    pub colors: Vec<Word>,
}

impl TupleColoring {
    pub fn histogram(&self) -> std::collections::BTreeMap<Word, usize> {
        super::histogram(&self.colors)
    }

    fn check(&self, budget: TupleBudget) -> Result<()> {
        let expected = budget.tuples(self.n, self.k)?;
        if self.colors.len() != expected {
            return Err(Error::input(format!(
                "{} tuple colors, expected {expected}",
                self.colors.len()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TupleVariant {
    /// Independent substitution in each coordinate.
    Wl,
    /// One substituted node shared across all coordinates.
    Fwl,
}

fn pow(n: usize, e: usize) -> usize {
    (0..e).fold(1, |acc, _| acc * n)
}

/// Atomic type of each tuple: base colors of its coordinates followed by the
/// equality/adjacency pattern of every coordinate pair.
fn atomic_signatures(g: &AttributedGraph, x: &ColorVector, k: usize, budget: TupleBudget) -> Result<Vec<Vec<Word>>> {
    x.check(g.n())?;
    let n = g.n();
    let tuples = budget.tuples(n, k)?;
    let mut coords = vec![0; k];
    Ok((0..tuples)
        .map(|t| {
            decode_tuple(t, n, &mut coords);
            let mut sig: Vec<Word> = coords.iter().map(|&c| x.0[c]).collect();
            for i in 0..k {
                for j in i + 1..k {
                    sig.push(match (coords[i], coords[j]) {
                        (a, b) if a == b => 0,
                        (a, b) if g.has_edge(a, b) => 1,
                        _ => 2,
                    });
                }
            }
            sig
        })
        .collect())
}

/// Shared dense rank over per-graph signature lists.
fn joint_rank(per_graph: Vec<Vec<Vec<Word>>>) -> Vec<Vec<Word>> {
    let lens: Vec<usize> = per_graph.iter().map(Vec::len).collect();
    let flat: Vec<Vec<Word>> = per_graph.into_iter().flatten().collect();
    let mut ranks = dense_ranks(&flat).into_iter();
    lens.iter().map(|&l| ranks.by_ref().take(l).collect()).collect()
}

pub fn kwl_initial(g: &AttributedGraph, x: &ColorVector, k: usize) -> Result<TupleColoring> {
    Ok(kwl_initial_joint(&[(g, x)], k, TupleBudget::default())?.remove(0))
}

pub fn kwl_initial_joint(
    items: &[(&AttributedGraph, &ColorVector)],
    k: usize,
    budget: TupleBudget,
) -> Result<Vec<TupleColoring>> {
    let sigs = items
        .iter()
        .map(|(g, x)| atomic_signatures(g, x, k, budget))
        .collect::<Result<Vec<_>>>()?;
    Ok(joint_rank(sigs)
        .into_iter()
        .zip(items)
        .map(|(colors, (g, _))| TupleColoring { n: g.n(), k, colors })
        .collect())
}

fn step_signatures(tc: &TupleColoring, variant: TupleVariant) -> Vec<Vec<Word>> {
    let (n, k) = (tc.n, tc.k);
    let strides: Vec<usize> = (0..k).map(|i| pow(n, k - 1 - i)).collect();
    let mut coords = vec![0; k];
    (0..tc.colors.len())
        .map(|t| {
            decode_tuple(t, n, &mut coords);
            let substituted = |i: usize, w: usize| tc.colors[t - coords[i] * strides[i] + w * strides[i]];
            let mut sig = vec![tc.colors[t]];
            match variant {
                TupleVariant::Wl => {
                    for i in 0..k {
                        let mut ms: Vec<Word> = (0..n).map(|w| substituted(i, w)).collect();
                        ms.sort_unstable();
                        sig.extend(ms);
                    }
                }
                TupleVariant::Fwl => {
                    let mut ms: Vec<Vec<Word>> =
                        (0..n).map(|w| (0..k).map(|i| substituted(i, w)).collect()).collect();
                    ms.sort_unstable();
                    sig.extend(ms.into_iter().flatten());
                }
            }
            sig
        })
        .collect()
}

fn step_joint(items: &[&TupleColoring], variant: TupleVariant, budget: TupleBudget) -> Result<Vec<TupleColoring>> {
    for tc in items {
        tc.check(budget)?;
    }
    let sigs = items.iter().map(|tc| step_signatures(tc, variant)).collect();
    Ok(joint_rank(sigs)
        .into_iter()
        .zip(items)
        .map(|(colors, tc)| TupleColoring { n: tc.n, k: tc.k, colors })
        .collect())
}

fn check_graph(g: &AttributedGraph, k: usize, x: &TupleColoring) -> Result<()> {
    if x.n != g.n() || x.k != k {
        return Err(Error::input("tuple coloring does not match graph and order"));
    }
    Ok(())
}

/// One k-WL step: rank of (own color, sorted substitution multiset per coordinate).
pub fn kwl_step(g: &AttributedGraph, k: usize, x: &TupleColoring) -> Result<TupleColoring> {
    check_graph(g, k, x)?;
    Ok(step_joint(&[x], TupleVariant::Wl, TupleBudget::default())?.remove(0))
}

/// One k-FWL step: rank of (own color, sorted multiset over `w` of the
/// k-vector of colors with each coordinate replaced by `w`).
pub fn kfwl_step(g: &AttributedGraph, k: usize, x: &TupleColoring) -> Result<TupleColoring> {
    check_graph(g, k, x)?;
    Ok(step_joint(&[x], TupleVariant::Fwl, TupleBudget::default())?.remove(0))
}

/// Refines several graphs' tuple colorings jointly, starting from atomic
/// types, until the joint partition stops changing. Returns final colorings
/// and the number of steps.
pub fn refine_tuples_stable_joint(
    items: &[(&AttributedGraph, &ColorVector)],
    k: usize,
    variant: TupleVariant,
    budget: TupleBudget,
) -> Result<(Vec<TupleColoring>, usize)> {
    let mut current = kwl_initial_joint(items, k, budget)?;
    let flat = |v: &[TupleColoring]| -> Vec<Word> { v.iter().flat_map(|tc| tc.colors.iter().copied()).collect() };
    let mut iterations = 0;
    loop {
        let refs: Vec<&TupleColoring> = current.iter().collect();
        let next = step_joint(&refs, variant, budget)?;
        iterations += 1;
        if partition_of(&flat(&next)) == partition_of(&flat(&current)) {
            return Ok((next, iterations));
        }
        current = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_erdos_renyi, gen_family, Family};
    use crate::wl::refines;

    fn stable_pair(g1: &AttributedGraph, g2: &AttributedGraph, k: usize, v: TupleVariant) -> bool {
        let (x1, x2) = (ColorVector::uniform(g1.n()), ColorVector::uniform(g2.n()));
        let (out, _) = refine_tuples_stable_joint(&[(g1, &x1), (g2, &x2)], k, v, TupleBudget::default()).unwrap();
        out[0].histogram() != out[1].histogram()
    }

    fn hexagon_and_triangles() -> (AttributedGraph, AttributedGraph) {
        let c6 = gen_family(Family::Cycle, 6).unwrap();
        let c3 = gen_family(Family::Cycle, 3).unwrap();
        (c6, c3.disjoint_union(&c3).unwrap())
    }

    #[test]
    fn folklore_two_separates_hexagon_from_triangles() {
        let (a, b) = hexagon_and_triangles();
        assert!(stable_pair(&a, &b, 2, TupleVariant::Fwl));
    }

    #[test]
    fn oblivious_two_does_not_separate_hexagon_from_triangles() {
        // Independent substitution at k = 2 has the power of colour refinement.
        let (a, b) = hexagon_and_triangles();
        assert!(!stable_pair(&a, &b, 2, TupleVariant::Wl));
    }

    #[test]
    fn relabeled_graphs_share_histograms() {
        let g = gen_erdos_renyi(7, 0.4, 11).unwrap();
        let h = g.relabeled(&[3, 5, 0, 6, 1, 2, 4]);
        for v in [TupleVariant::Wl, TupleVariant::Fwl] {
            assert!(!stable_pair(&g, &h, 2, v));
        }
    }

    #[test]
    fn uniform_on_complete_graph() {
        let g = gen_family(Family::Complete, 5).unwrap();
        let x = ColorVector::uniform(5);
        let tc = kwl_initial(&g, &x, 1).unwrap();
        let out = kwl_step(&g, 1, &tc).unwrap();
        assert!(out.colors.iter().all(|&c| c == out.colors[0]));
    }

    #[test]
    fn fwl_uniform_on_vertex_transitive_orbits() {
        // On C_5 the 2-tuples fall into orbits by distance; FWL never splits an orbit.
        let g = gen_family(Family::Cycle, 5).unwrap();
        let tc = kwl_initial(&g, &ColorVector::uniform(5), 2).unwrap();
        let out = kfwl_step(&g, 2, &tc).unwrap();
        let diag: Vec<Word> = (0..5).map(|u| out.colors[u * 5 + u]).collect();
        assert!(diag.iter().all(|&c| c == diag[0]));
    }

    #[test]
    fn fwl_refines_at_least_as_much_as_wl() {
        for seed in 0..20 {
            let g = gen_erdos_renyi(6, 0.4, seed).unwrap();
            let x = ColorVector::uniform(6);
            let mut a = kwl_initial(&g, &x, 2).unwrap();
            let mut b = a.clone();
            for _ in 0..3 {
                a = kwl_step(&g, 2, &a).unwrap();
                b = kfwl_step(&g, 2, &b).unwrap();
                assert!(refines(&b.colors, &a.colors), "seed {seed}");
            }
        }
    }

    #[test]
    fn budget_violation_is_resource_error() {
        let g = AttributedGraph::empty(2000);
        let err = kwl_initial(&g, &ColorVector::uniform(2000), 2).unwrap_err();
        assert!(matches!(err, Error::Resource(_)));
    }
}
