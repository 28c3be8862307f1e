use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{cut_edge_local, cut_sets_tarjan, cut_vertex_local, resistance_matrix, PREDICATE_TOL};
use crate::graph::{gen_erdos_renyi, largest_component};
use crate::{rng, Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalityConfig {
    pub count: usize,
    pub n_min: usize,
    pub n_max: usize,
    /// Edge probability `degree / n`.
    pub degree: f64,
    pub seed: u64,
    pub tol: f64,
}

impl Default for LocalityConfig {
    fn default() -> Self {
        LocalityConfig { count: 200, n_min: 20, n_max: 100, degree: 5.0, seed: 0, tol: PREDICATE_TOL }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeFlag {
    pub u: usize,
    pub v: usize,
    pub predicted: bool,
    pub actual: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeFlag {
    pub node: usize,
    pub predicted: bool,
    pub actual: bool,
}

/// One sampled graph, evaluated on its largest connected component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphOutcome {
    pub index: usize,
    pub graph_seed: u64,
    pub sampled_n: usize,
    pub p: f64,
    pub component_n: usize,
    pub component_m: usize,
    pub edges: Vec<EdgeFlag>,
    pub nodes: Vec<NodeFlag>,
}

impl GraphOutcome {
    pub fn edges_correct(&self) -> bool {
        self.edges.iter().all(|f| f.predicted == f.actual)
    }

    pub fn nodes_correct(&self) -> bool {
        self.nodes.iter().all(|f| f.predicted == f.actual)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalityReport {
    pub config: LocalityConfig,
    pub graphs: Vec<GraphOutcome>,
    /// Share of graphs whose every edge is classified correctly; `None`
    /// without graphs.
    pub edge_accuracy: Option<f64>,
    pub node_accuracy: Option<f64>,
}

impl LocalityReport {
    /// `index,graph_seed,sampled_n,p,component_n,component_m,bridges,cut_vertices,edges_correct,nodes_correct`
    pub fn write_csv(&self, out: impl std::io::Write) -> Result<()> {
        let mut out = out;
        writeln!(out, "index,graph_seed,sampled_n,p,component_n,component_m,bridges,cut_vertices,edges_correct,nodes_correct")?;
        for g in &self.graphs {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                g.index,
                g.graph_seed,
                g.sampled_n,
                g.p,
                g.component_n,
                g.component_m,
                g.edges.iter().filter(|f| f.actual).count(),
                g.nodes.iter().filter(|f| f.actual).count(),
                g.edges_correct(),
                g.nodes_correct()
            )?;
        }
        Ok(())
    }
}

fn evaluate(cfg: &LocalityConfig, index: usize) -> Result<GraphOutcome> {
    let mut draw = rng::split(cfg.seed, 1 + index as u64);
    let sampled_n = draw.gen_range(cfg.n_min..=cfg.n_max);
    let graph_seed: u64 = draw.gen();
    let p = (cfg.degree / sampled_n as f64).min(1.0);
    let g = largest_component(&gen_erdos_renyi(sampled_n, p, graph_seed)?);
    let r = resistance_matrix(&g)?;
    let truth = cut_sets_tarjan(&g);
    let edges = g
        .edges()
        .iter()
        .map(|&(u, v)| EdgeFlag {
            u,
            v,
            predicted: cut_edge_local(&r, (u, v), cfg.tol),
            actual: truth.bridges.contains(&(u, v)),
        })
        .collect();
    let nodes = (0..g.n())
        .map(|u| NodeFlag {
            node: u,
            predicted: cut_vertex_local(&g, &r, u, cfg.tol),
            actual: truth.articulation.contains(&u),
        })
        .collect();
    Ok(GraphOutcome { index, graph_seed, sampled_n, p, component_n: g.n(), component_m: g.m(), edges, nodes })
}

/// Samples `count` Erdos-Renyi graphs with `n` uniform in `[n_min, n_max]`
/// and `p = degree / n`, keeps each graph's largest component, and scores
/// the resistance predicates against Tarjan. Graph `i` depends only on
/// `(seed, i)`.
pub fn experiment_locality(cfg: &LocalityConfig) -> Result<LocalityReport> {
    if cfg.n_min == 0 || cfg.n_min > cfg.n_max {
        return Err(Error::param(format!("invalid node range [{}, {}]", cfg.n_min, cfg.n_max)));
    }
    if !(cfg.degree > 0.0) || !(cfg.tol >= 0.0) {
        return Err(Error::param("degree must be positive and tol nonnegative"));
    }
    let graphs = (0..cfg.count).into_par_iter().map(|i| evaluate(cfg, i)).collect::<Result<Vec<_>>>()?;
    let share = |hit: fn(&GraphOutcome) -> bool| {
        (!graphs.is_empty()).then(|| graphs.iter().filter(|g| hit(g)).count() as f64 / graphs.len() as f64)
    };
    let edge_accuracy = share(GraphOutcome::edges_correct);
    let node_accuracy = share(GraphOutcome::nodes_correct);
    Ok(LocalityReport { config: cfg.clone(), graphs, edge_accuracy, node_accuracy })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_experiment() {
        let report = experiment_locality(&LocalityConfig { count: 0, ..Default::default() }).unwrap();
        assert!(report.graphs.is_empty());
        assert_eq!(report.edge_accuracy, None);
    }

    #[test]
    fn small_run_is_exact_and_reproducible() {
        let cfg = LocalityConfig { count: 12, seed: 5, ..Default::default() };
        let a = experiment_locality(&cfg).unwrap();
        assert_eq!(a.edge_accuracy, Some(1.0));
        assert_eq!(a.node_accuracy, Some(1.0));
        assert_eq!(a, experiment_locality(&cfg).unwrap());
        assert!(a.graphs.iter().all(|g| (20..=100).contains(&g.sampled_n) && g.component_n <= g.sampled_n));
    }

    #[test]
    fn invalid_range_rejected() {
        assert!(experiment_locality(&LocalityConfig { n_min: 50, n_max: 10, ..Default::default() }).is_err());
    }
}
