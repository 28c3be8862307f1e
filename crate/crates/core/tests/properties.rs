use std::collections::BTreeMap;

use proptest::prelude::*;
use rlcongest::algos::{expander_route, flood_bfs, Backend, Router, Token};
use rlcongest::gadget::{build_eq_gadget, index_of, pair_of, GadgetSpec};
use rlcongest::graph::{
    add_virtual_node, assign_unique_ids, eccentricity, gen_erdos_renyi, gen_random_connected, largest_component,
    metrics,
};
use rlcongest::resistance::{cut_edge_local, cut_sets_tarjan, cut_vertex_local, resistance_matrix, PREDICATE_TOL};
use rlcongest::sim::{BudgetClass, StepBudget};
use rlcongest::wl::{partition_of, refines, verify_wl_coloring, wl_step_reference};
use rlcongest::{AttributedGraph, ColorVector, Word};

fn er() -> impl Strategy<Value = AttributedGraph> {
    (1usize..40, 0.0f64..0.5, any::<u64>()).prop_map(|(n, p, seed)| gen_erdos_renyi(n, p, seed).unwrap())
}

fn connected(max_n: usize) -> impl Strategy<Value = AttributedGraph> {
    (2usize..=max_n, any::<u64>(), 0.0f64..1.0).prop_map(|(n, seed, density)| {
        let extra = ((n * (n - 1) / 2 - (n - 1)) as f64 * density * density) as usize;
        gen_random_connected(n, n - 1 + extra, seed).unwrap()
    })
}

fn colored(g: AttributedGraph, classes: Word, seed: u64) -> (AttributedGraph, ColorVector) {
    let x = (0..g.n() as u64).map(|u| (u.wrapping_mul(2654435761).wrapping_add(seed) % classes as u64) as Word);
    let x = ColorVector(x.collect());
    (g, x)
}

fn permutation(n: usize, seed: u64) -> Vec<usize> {
    let mut keyed: Vec<(u64, usize)> = (0..n).map(|u| ((u as u64 ^ seed).wrapping_mul(0x9E37_79B9_7F4A_7C15), u)).collect();
    keyed.sort();
    keyed.into_iter().map(|(_, u)| u).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_graphs_are_consistent(g in er()) {
        prop_assert!(g.validate().is_ok());
        let m = metrics(&g);
        let degree_sum: usize = (0..g.n()).map(|u| g.degree(u)).sum();
        prop_assert_eq!(degree_sum, 2 * g.m());
        prop_assert!(m.max_degree >= m.min_degree);
        prop_assert!(m.conductance_lb >= 0.0);
        if g.m() > 0 {
            prop_assert!(m.diameter.map_or(true, |d| d >= 1));
        }
    }

    #[test]
    fn erdos_renyi_reproducible(n in 1usize..60, p in 0.0f64..1.0, seed: u64) {
        prop_assert_eq!(gen_erdos_renyi(n, p, seed).unwrap(), gen_erdos_renyi(n, p, seed).unwrap());
    }

    #[test]
    fn hub_diameter_at_most_two(g in er()) {
        prop_assert!(metrics(&add_virtual_node(&g)).diameter.unwrap() <= 2);
    }

    #[test]
    fn reference_step_is_a_wl_coloring(g in er(), classes in 1i64..5, seed: u64) {
        let (g, x) = colored(g, classes, seed);
        let y = wl_step_reference(&g, &x).unwrap();
        prop_assert!(verify_wl_coloring(&g, &x, &y).unwrap());
        prop_assert!(y.0.iter().all(|&c| c >= 1));
    }

    #[test]
    fn reference_step_commutes_with_relabeling(g in er(), classes in 1i64..5, seed: u64) {
        let (g, x) = colored(g, classes, seed);
        let perm = permutation(g.n(), seed);
        let h = g.relabeled(&perm);
        let mut hx = vec![0; g.n()];
        for u in 0..g.n() {
            hx[perm[u]] = x.0[u];
        }
        let y = wl_step_reference(&g, &x).unwrap();
        let hy = wl_step_reference(&h, &ColorVector(hx)).unwrap();
        for u in 0..g.n() {
            prop_assert_eq!(y.0[u], hy.0[perm[u]]);
        }
    }

    #[test]
    fn order_preserving_recoloring_gives_same_output(g in er(), classes in 1i64..5, seed: u64, scale in 1i64..100, shift in 0i64..1000) {
        let (g, x) = colored(g, classes, seed);
        let renamed = ColorVector(x.0.iter().map(|&c| scale * c + shift).collect());
        prop_assert_eq!(wl_step_reference(&g, &x).unwrap(), wl_step_reference(&g, &renamed).unwrap());
    }

    #[test]
    fn repeated_steps_refine(g in er(), classes in 1i64..5, seed: u64) {
        let (g, x) = colored(g, classes, seed);
        let y = wl_step_reference(&g, &x).unwrap();
        let z = wl_step_reference(&g, &y).unwrap();
        prop_assert!(refines(&z.0, &y.0));
        prop_assert!(partition_of(&z.0).iter().max() >= partition_of(&y.0).iter().max());
    }

    #[test]
    fn budget_monotone(n in 1usize..10_000, d in 0usize..500, dn in 0usize..100, dd in 0usize..50) {
        for class in [BudgetClass::NLogN, BudgetClass::NDeltaLogN, BudgetClass::DeltaLogSquared] {
            let b = StepBudget::new(class);
            let base = b.bound(n, d).unwrap();
            prop_assert!(base >= 1);
            prop_assert!(b.bound(n + dn, d).unwrap() >= base);
            prop_assert!(b.bound(n, d + dd).unwrap() >= base);
        }
    }

    #[test]
    fn flood_tree_is_bfs(g in connected(40), root_seed: u64, w in 1usize..4) {
        let root = (root_seed % g.n() as u64) as usize;
        let (tree, log) = flood_bfs(&assign_unique_ids(&g), root, w).unwrap();
        prop_assert!(tree.validate(&g).is_ok());
        prop_assert_eq!(tree.depth[root], 0);
        for u in 0..g.n() {
            if let Some(p) = tree.parent[u] {
                prop_assert!(g.has_edge(u, p));
                prop_assert_eq!(tree.depth[u], tree.depth[p] + 1);
            }
        }
        let ecc = eccentricity(&g, root).unwrap();
        prop_assert_eq!(tree.height(), ecc);
        prop_assert!(log.rounds <= ecc + 1);
        prop_assert!(log.max_edge_words() <= w);
    }

    #[test]
    fn resistance_matrix_invariants(g in connected(24)) {
        let r = resistance_matrix(&g).unwrap();
        prop_assert!(r.check(&g, 1e-9).is_ok());
        let n = g.n();
        for s in 0..n {
            prop_assert!(r.get(s, s).abs() <= 1e-9);
            for t in 0..n {
                prop_assert!((r.get(s, t) - r.get(t, s)).abs() <= 1e-9);
                prop_assert!(r.get(s, t) >= -1e-9);
                for u in 0..n {
                    prop_assert!(r.get(s, t) <= r.get(s, u) + r.get(u, t) + 1e-9);
                }
            }
        }
        for &(u, v) in g.edges() {
            prop_assert!(r.get(u, v) > 0.0 && r.get(u, v) <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn local_predicates_match_tarjan(g in er()) {
        let g = largest_component(&g);
        prop_assume!(g.n() >= 2);
        let r = resistance_matrix(&g).unwrap();
        let cuts = cut_sets_tarjan(&g);
        for &e in g.edges() {
            prop_assert_eq!(cut_edge_local(&r, e, PREDICATE_TOL), cuts.bridges.contains(&e));
        }
        for u in 0..g.n() {
            prop_assert_eq!(cut_vertex_local(&g, &r, u, PREDICATE_TOL), cuts.articulation.contains(&u));
        }
    }

    #[test]
    fn gadget_pair_index_round_trip(n in 1usize..30, k_seed: usize) {
        let k = 1 + k_seed % (n * n);
        let (i, j) = pair_of(k, n);
        prop_assert!(i >= 1 && (1..=n).contains(&j));
        prop_assert_eq!(index_of((i, j), n), k);
    }

    #[test]
    fn gadget_counts_and_colors(n in 2usize..8, m_seed: usize, path_len in 0usize..6, seed: u64) {
        let m = n + m_seed % (n * n - n + 1);
        let spec = GadgetSpec::random(n, m, seed % 2 == 0, seed).unwrap().with_path_len(path_len);
        let gg = build_eq_gadget(&spec).unwrap();
        prop_assert_eq!(gg.graph.n(), 4 * n + 2 * m.div_ceil(n) + 2 + path_len);
        prop_assert_eq!(gg.graph.m(), 2 * (2 * n - 1) + 2 * m.div_ceil(n) + 1 + 2 * m + path_len);
        prop_assert!(gg.roles.x.iter().all(|&x| gg.colors.0[x] == 0));
        prop_assert!(gg.colors.0.iter().all(|&c| c >= 0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn routing_conserves_tokens(g in connected(32), cap in 1usize..4, w in 1usize..6, seed: u64, tree: bool) {
        let g = assign_unique_ids(&g);
        let n = g.n();
        let perm = permutation(n, seed);
        // node u sends up to cap tokens to perm[(u + j) % n]: every destination receives at most cap
        let tokens: Vec<Vec<Token>> = (0..n)
            .map(|u| {
                let count = (u as u64 ^ seed) as usize % (cap + 1);
                (0..count)
                    .map(|j| {
                        let tag = (u * cap + j) as Word;
                        Token::new(vec![(seed as Word % 97) ^ tag], tag, u as Word, perm[(u + j) % n] as Word)
                    })
                    .collect()
            })
            .collect();
        let backend = if tree { Backend::Tree } else { Backend::Direct };
        let router = Router::new(&g, backend, w).unwrap();
        let (arrived, log) = expander_route(&router, tokens.clone(), cap).unwrap();
        let census = |lists: &[Vec<Token>]| {
            let mut m = BTreeMap::new();
            for t in lists.iter().flatten() {
                *m.entry((t.key.clone(), t.tag, t.src)).or_insert(0usize) += 1;
            }
            m
        };
        prop_assert_eq!(census(&arrived), census(&tokens));
        for (v, list) in arrived.iter().enumerate() {
            prop_assert!(list.iter().all(|t| t.dst == v as Word));
        }
        prop_assert!(log.max_edge_words() <= w);
    }
}
