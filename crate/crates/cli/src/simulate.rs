//! `sim`: run one distributed algorithm and log its rounds.

use std::io::Write;
use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, ValueEnum};
use serde_json::json;

use rlcongest::algos::{
    bounds, downcast, flood_bfs, global_compute, upcast, wl_congest_config, wl_congest_with, wl_virtual_edges_with,
    wl_virtual_node, Addressed,
};
use rlcongest::graph::{assign_unique_ids, eccentricity, metrics};
use rlcongest::sim::RoundLog;
use rlcongest::wl::wl_step_reference;
use rlcongest::{AttributedGraph, ColorVector, Word};

use crate::graphs::{load_colors, load_graph};
use crate::output::Outputs;
use crate::{BackendArg, CmdResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Flood,
    Upcast,
    Downcast,
    Wl,
    Vnode,
    Vedge,
    Global,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GlobalFn {
    /// One WL step of the node colors.
    Wl,
    Degree,
    Eccentricity,
}

#[derive(Debug, Args)]
pub struct SimArgs {
    #[arg(long, value_enum)]
    pub algo: Algo,
    #[arg(long)]
    pub graph: PathBuf,
    /// Initial colors (wl, vnode, vedge, global); vnode takes one per original node.
    #[arg(long)]
    pub colors: Option<PathBuf>,
    /// Words per edge direction per round.
    #[arg(long, default_value_t = 1)]
    pub w: usize,
    /// Routing backend for vedge.
    #[arg(long, value_enum, default_value = "direct")]
    pub backend: BackendArg,
    /// Tree root for flood, upcast and downcast.
    #[arg(long, default_value_t = 0)]
    pub root: usize,
    #[arg(long, value_enum, default_value = "wl")]
    pub global_fn: GlobalFn,
    /// Simulator worker threads (wl).
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
}

fn write_rows(out: &mut Outputs, name: &str, rows: &[Vec<Word>]) -> Result<()> {
    let mut file = out.create(name)?;
    for row in rows {
        let line: Vec<String> = row.iter().map(Word::to_string).collect();
        writeln!(file, "{}", line.join(" "))?;
    }
    Ok(())
}

fn with_ids(g: AttributedGraph) -> AttributedGraph {
    if g.labels().is_some() {
        g
    } else {
        assign_unique_ids(&g)
    }
}

pub fn sim(a: &SimArgs, out: &mut Outputs) -> CmdResult {
    let g = with_ids(load_graph(&a.graph)?);
    if a.root >= g.n() && matches!(a.algo, Algo::Flood | Algo::Upcast | Algo::Downcast) {
        anyhow::bail!("root {} is not a node", a.root);
    }
    let mut bound: Option<usize> = None;
    let log: RoundLog = match a.algo {
        Algo::Flood => {
            let (tree, log) = flood_bfs(&g, a.root, a.w)?;
            let mut file = out.create("tree.csv")?;
            writeln!(file, "node,parent,depth")?;
            for u in 0..g.n() {
                let parent = tree.parent[u].map_or(String::new(), |p| p.to_string());
                writeln!(file, "{u},{parent},{}", tree.depth[u])?;
            }
            log
        }
        Algo::Upcast | Algo::Downcast => {
            let (tree, mut log) = flood_bfs(&g, a.root, a.w)?;
            let ids: Vec<Word> = (0..g.n()).map(|u| g.labels().map_or(u as Word, |l| l[u])).collect();
            if a.algo == Algo::Upcast {
                let tokens: Vec<Vec<Vec<Word>>> = ids.iter().map(|&id| vec![vec![id]]).collect();
                let (collected, cast) = upcast(&g, &tree, &tokens, a.w)?;
                log.append("upcast", cast);
                write_rows(out, "collected.txt", &collected)?;
            } else {
                let messages: Vec<Addressed> =
                    (0..g.n()).map(|v| Addressed { dst: v, payload: vec![ids[v]] }).collect();
                let (delivered, cast) = downcast(&g, &tree, &messages, a.w)?;
                log.append("downcast", cast);
                let mut file = out.create("delivered.csv")?;
                writeln!(file, "node,payload")?;
                for (u, msgs) in delivered.iter().enumerate() {
                    for m in msgs {
                        let words: Vec<String> = m.iter().map(Word::to_string).collect();
                        writeln!(file, "{u},{}", words.join(" "))?;
                    }
                }
            }
            log
        }
        Algo::Wl => {
            let x = load_colors(a.colors.as_ref(), g.n())?;
            let cfg = wl_congest_config(&g, a.w).with_threads(a.threads);
            let (y, log) = wl_congest_with(&g, &x, cfg)?;
            y.write(out.create("colors.txt")?)?;
            bound = Some(bounds::wl_congest_bound(&g, a.w));
            log
        }
        Algo::Vnode => {
            let x = load_colors(a.colors.as_ref(), g.n().saturating_sub(1))?;
            let (y, log) = wl_virtual_node(&g, &x, a.w)?;
            y.write(out.create("colors.txt")?)?;
            if let Some(hub) = g.virtual_node() {
                let delta = (0..g.n()).filter(|&u| u != hub).map(|u| g.degree(u) - 1).max().unwrap_or(0);
                bound = Some(bounds::vnode_bound(delta, a.w));
            }
            log
        }
        Algo::Vedge => {
            let x = load_colors(a.colors.as_ref(), g.n())?;
            let (y, log) = wl_virtual_edges_with(&g, &x, a.w, a.backend.into())?;
            y.write(out.create("colors.txt")?)?;
            log
        }
        Algo::Global => {
            let x = load_colors(a.colors.as_ref(), g.n())?;
            let h = g.clone().with_features(x.0.iter().map(|&c| vec![c]).collect())?;
            let f = a.global_fn;
            let (rows, log) = global_compute(
                &h,
                move |r: &AttributedGraph| -> rlcongest::Result<Vec<Vec<Word>>> {
                    Ok(match f {
                        GlobalFn::Wl => {
                            let x = ColorVector(r.features().iter().map(|row| row[0]).collect());
                            wl_step_reference(r, &x)?.0.into_iter().map(|c| vec![c]).collect()
                        }
                        GlobalFn::Degree => (0..r.n()).map(|u| vec![r.degree(u) as Word]).collect(),
                        GlobalFn::Eccentricity => {
                            (0..r.n()).map(|u| vec![eccentricity(r, u).map_or(-1, |e| e as Word)]).collect()
                        }
                    })
                },
                a.w,
            )?;
            write_rows(out, if f == GlobalFn::Wl { "colors.txt" } else { "values.txt" }, &rows)?;
            bound = Some(bounds::global_compute_bound(&g, a.w));
            log
        }
    };
    log.write_edges_csv(out.create("rounds.csv")?)?;
    log.write_steps_csv(out.create("steps.csv")?)?;
    let m = metrics(&g);
    let summary = json!({
        "algo": format!("{:?}", a.algo).to_lowercase(),
        "n": g.n(),
        "m": g.m(),
        "w": a.w,
        "diameter": m.diameter,
        "max_degree": m.max_degree,
        "log": log.summary(),
        "bound": bound,
        "within_bound": bound.map(|b| log.rounds <= b),
    });
    serde_json::to_writer_pretty(out.create("summary.json")?, &summary)?;
    out.set_summary(&summary)?;
    println!("{:?}: {} rounds ({} transmitting), {} words", a.algo, log.rounds, log.transmission_rounds, log.total_words);
    Ok(())
}
