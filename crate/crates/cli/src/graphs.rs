//! `gen` and `wl`.

use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde_json::json;

use rlcongest::graph::{
    add_virtual_edges, add_virtual_node, assign_unique_ids, gen_erdos_renyi, gen_family, gen_random_connected,
    largest_component, read_graph, write_graph_json, write_graph_text, Family, GraphFormat,
};
use rlcongest::wl::{
    gdwl_step, kfwl_step, kwl_initial, kwl_step, refine_tuples_stable_joint, spd_matrix, wl_refine_stable,
    wl_step_reference, DistanceMatrix, TupleVariant,
};
use rlcongest::{AttributedGraph, ColorVector};

use crate::output::Outputs;
use crate::CmdResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Path,
    Cycle,
    Star,
    Complete,
    /// Erdos-Renyi `G(n, p)`.
    Er,
    /// Random connected graph with exactly `m` edges.
    Connected,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long)]
    pub n: usize,
    /// Edge probability (er).
    #[arg(long)]
    pub p: Option<f64>,
    /// Edge count (connected).
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Keep only the largest connected component.
    #[arg(long)]
    pub largest_component: bool,
    /// Attach IDs 0..n.
    #[arg(long)]
    pub ids: bool,
    /// Append a virtual node adjacent to every node (needs a .json name).
    #[arg(long)]
    pub virtual_node: bool,
    /// Add a random overlay with this delta (needs a .json name).
    #[arg(long)]
    pub overlay: Option<f64>,
    /// File name inside the output directory; `.json` selects JSON.
    #[arg(long, default_value = "graph.txt")]
    pub name: String,
}

pub fn gen(a: &GenArgs, out: &mut Outputs) -> CmdResult {
    out.set_seed(a.seed);
    let mut g = match a.family {
        FamilyArg::Path => gen_family(Family::Path, a.n)?,
        FamilyArg::Cycle => gen_family(Family::Cycle, a.n)?,
        FamilyArg::Star => gen_family(Family::Star, a.n)?,
        FamilyArg::Complete => gen_family(Family::Complete, a.n)?,
        FamilyArg::Er => gen_erdos_renyi(a.n, a.p.context("--p is required for er")?, a.seed)?,
        FamilyArg::Connected => gen_random_connected(a.n, a.m.context("--m is required for connected")?, a.seed)?,
    };
    if a.largest_component {
        g = largest_component(&g);
    }
    if a.ids {
        g = assign_unique_ids(&g);
    }
    if let Some(delta) = a.overlay {
        g = add_virtual_edges(&g, delta, a.seed)?;
    }
    if a.virtual_node {
        g = add_virtual_node(&g);
    }
    let format = GraphFormat::from_path(Path::new(&a.name));
    let needs_json = a.ids || a.virtual_node || a.overlay.is_some();
    if needs_json && format != GraphFormat::Json {
        bail!("IDs, virtual nodes and overlays are only kept by JSON; use --name with a .json extension");
    }
    let mut file = out.create(&a.name)?;
    match format {
        GraphFormat::Json => write_graph_json(&g, &mut file)?,
        GraphFormat::Text => write_graph_text(&g, &mut file)?,
    }
    out.set_summary(json!({ "n": g.n(), "m": g.m(), "file": a.name }))?;
    println!("{}: n = {}, m = {}", a.name, g.n(), g.m());
    Ok(())
}

pub fn load_graph(path: &Path) -> Result<AttributedGraph> {
    read_graph(path).with_context(|| format!("reading graph {}", path.display()))
}

/// Colors from `path`, or uniform colors for `n` nodes.
pub fn load_colors(path: Option<&PathBuf>, n: usize) -> Result<ColorVector> {
    match path {
        Some(p) => {
            let file = File::open(p).with_context(|| format!("opening colors {}", p.display()))?;
            let x = ColorVector::read(BufReader::new(file)).with_context(|| format!("reading colors {}", p.display()))?;
            x.check(n)?;
            Ok(x)
        }
        None => Ok(ColorVector::uniform(n)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    Wl,
    Kwl,
    Kfwl,
    Gdwl,
}

#[derive(Debug, Args)]
pub struct WlArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Initial colors, one per line (default: uniform).
    #[arg(long)]
    pub colors: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "wl")]
    pub variant: Variant,
    /// Tuple size for kwl/kfwl.
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 1)]
    pub iterations: usize,
    /// Refine until the partition is stable (wl, kwl, kfwl).
    #[arg(long)]
    pub stable: bool,
    /// Distance matrix CSV for gdwl (default: shortest-path distances).
    #[arg(long)]
    pub distances: Option<PathBuf>,
    #[arg(long, default_value = "colors.txt")]
    pub name: String,
}

pub fn wl(a: &WlArgs, out: &mut Outputs) -> CmdResult {
    let g = load_graph(&a.graph)?;
    let x = load_colors(a.colors.as_ref(), g.n())?;
    let (colors, iterations) = match a.variant {
        Variant::Wl if a.stable => wl_refine_stable(&g, &x)?,
        Variant::Wl => {
            let mut y = x;
            for _ in 0..a.iterations {
                y = wl_step_reference(&g, &y)?;
            }
            (y, a.iterations)
        }
        Variant::Kwl | Variant::Kfwl => {
            let variant = if a.variant == Variant::Kwl { TupleVariant::Wl } else { TupleVariant::Fwl };
            if a.stable {
                let (mut tc, it) = refine_tuples_stable_joint(&[(&g, &x)], a.k, variant, Default::default())?;
                (ColorVector(tc.remove(0).colors), it)
            } else {
                let mut tc = kwl_initial(&g, &x, a.k)?;
                for _ in 0..a.iterations {
                    tc = match variant {
                        TupleVariant::Wl => kwl_step(&g, a.k, &tc)?,
                        TupleVariant::Fwl => kfwl_step(&g, a.k, &tc)?,
                    };
                }
                (ColorVector(tc.colors), a.iterations)
            }
        }
        Variant::Gdwl => {
            let dist = match &a.distances {
                Some(p) => {
                    let file = File::open(p).with_context(|| format!("opening {}", p.display()))?;
                    DistanceMatrix::read_csv(BufReader::new(file))?
                }
                None => spd_matrix(&g)?,
            };
            let mut y = x;
            for _ in 0..a.iterations {
                y = gdwl_step(&g, &dist, &y)?;
            }
            (y, a.iterations)
        }
    };
    colors.write(out.create(&a.name)?)?;
    let classes = colors.class_count();
    out.set_summary(json!({ "variant": format!("{:?}", a.variant).to_lowercase(), "iterations": iterations, "classes": classes, "entries": colors.len() }))?;
    println!("{}: {} entries, {classes} color classes after {iterations} iteration(s)", a.name, colors.len());
    Ok(())
}
