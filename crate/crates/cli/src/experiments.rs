//! `gadget` and `locality`.

use std::fs::File;
use std::io::{BufReader, Write};
use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, Subcommand};
use serde_json::json;

use rlcongest::gadget::{
    build_eq_gadget, format_bits, gadget_round_scan, parse_bits, trend_violations, verify_gadget_property,
    GadgetGraph, GadgetSpec,
};
use rlcongest::graph::write_graph_text;
use rlcongest::resistance::{experiment_locality, LocalityConfig, PREDICATE_TOL};
use rlcongest::wl::wl_step_reference;

use crate::output::Outputs;
use crate::{CmdResult, Violation};

#[derive(Debug, Subcommand)]
pub enum GadgetCmd {
    /// Write graph.txt, gadget.json (spec, roles, colors) and colors.txt.
    Build {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Alice's bits, e.g. 0110 (random when omitted).
        #[arg(long)]
        a: Option<String>,
        /// Bob's bits (random, or equal to a with --equal, when omitted).
        #[arg(long)]
        b: Option<String>,
        #[arg(long)]
        equal: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        path_len: usize,
    },
    /// Check the w-pair agreement against a = b.
    Verify {
        #[arg(long)]
        gadget: PathBuf,
        /// Refined colors (default: one reference WL step).
        #[arg(long)]
        colors: Option<PathBuf>,
    },
    /// wl_congest rounds over an (m, w) grid.
    Scan {
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [16, 64, 256])]
        m: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = [1, 4, 16])]
        w: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        path_len: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

pub fn gadget(cmd: &GadgetCmd, out: &mut Outputs) -> CmdResult {
    match cmd {
        GadgetCmd::Build { n, m, a, b, equal, seed, path_len } => {
            out.set_seed(*seed);
            let random = GadgetSpec::random(*n, *m, *equal, *seed)?;
            let a_bits = match a {
                Some(s) => parse_bits(s)?,
                None => random.a.clone(),
            };
            let b_bits = match (b, equal) {
                (Some(s), _) => parse_bits(s)?,
                (None, true) => a_bits.clone(),
                (None, false) => random.b.clone(),
            };
            let spec = GadgetSpec::new(*n, *m, a_bits, b_bits)?.with_path_len(*path_len);
            let gg = build_eq_gadget(&spec)?;
            write_graph_text(&gg.graph, out.create("graph.txt")?)?;
            serde_json::to_writer_pretty(out.create("gadget.json")?, &gg)?;
            gg.colors.write(out.create("colors.txt")?)?;
            let summary = json!({
                "n": n, "m": m, "a": format_bits(&spec.a), "b": format_bits(&spec.b),
                "nodes": gg.graph.n(), "edges": gg.graph.m(), "path_len": path_len,
            });
            out.set_summary(&summary)?;
            println!("gadget: {} nodes, {} edges, a {} b", gg.graph.n(), gg.graph.m(), if spec.a == spec.b { "=" } else { "!=" });
            Ok(())
        }
        GadgetCmd::Verify { gadget, colors } => {
            let file = File::open(gadget).with_context(|| format!("opening {}", gadget.display()))?;
            let gg = GadgetGraph::read_json(BufReader::new(file)).context("parsing gadget JSON")?;
            let y = match colors {
                Some(p) => crate::graphs::load_colors(Some(p), gg.graph.n())?,
                None => wl_step_reference(&gg.graph, &gg.colors)?,
            };
            let agree = verify_gadget_property(&gg, &y)?;
            let equal = gg.spec.a == gg.spec.b;
            let summary = json!({ "a_equals_b": equal, "w_colors_agree": agree, "biconditional_holds": agree == equal });
            serde_json::to_writer_pretty(out.create("verify.json")?, &summary)?;
            out.set_summary(&summary)?;
            println!("a = b: {equal}; w colors agree: {agree}");
            if agree != equal {
                return Err(Violation("gadget biconditional fails".into()).into());
            }
            Ok(())
        }
        GadgetCmd::Scan { n, m, w, path_len, seed } => {
            out.set_seed(*seed);
            let rows = gadget_round_scan(*n, m, w, *path_len, *seed)?;
            let mut csv = csv::Writer::from_writer(out.create("scan.csv")?);
            csv.write_record(["n", "m", "w", "D", "rounds", "total_words", "path_len", "seed"])?;
            for r in &rows {
                csv.write_record([r.n, r.m, r.w, r.diameter, r.rounds, r.total_words as usize, r.path_len, r.seed as usize].map(|v| v.to_string()))?;
            }
            csv.flush()?;
            let violations = trend_violations(&rows);
            out.set_summary(json!({ "cells": rows.len(), "trend_violations": violations }))?;
            for r in &rows {
                println!("m={:<5} w={:<3} D={:<4} rounds={}", r.m, r.w, r.diameter, r.rounds);
            }
            if !violations.is_empty() {
                return Err(Violation(format!("round trends broken: {}", violations.join("; "))).into());
            }
            Ok(())
        }
    }
}

#[derive(Debug, Args)]
pub struct LocalityArgs {
    #[arg(long, default_value_t = 200)]
    pub count: usize,
    #[arg(long, default_value_t = 20)]
    pub n_min: usize,
    #[arg(long, default_value_t = 100)]
    pub n_max: usize,
    /// Expected degree; p = degree / n.
    #[arg(long, default_value_t = 5.0)]
    pub degree: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = PREDICATE_TOL)]
    pub tol: f64,
}

pub fn locality(a: &LocalityArgs, out: &mut Outputs) -> CmdResult {
    out.set_seed(a.seed);
    let cfg = LocalityConfig { count: a.count, n_min: a.n_min, n_max: a.n_max, degree: a.degree, seed: a.seed, tol: a.tol };
    let report = experiment_locality(&cfg)?;
    serde_json::to_writer(out.create("report.json")?, &report)?;
    report.write_csv(out.create("graphs.csv")?)?;
    let summary = json!({
        "graphs": report.graphs.len(),
        "edge_accuracy": report.edge_accuracy,
        "node_accuracy": report.node_accuracy,
        "config": cfg,
    });
    out.set_summary(&summary)?;
    let show = |acc: Option<f64>| acc.map_or("n/a".to_owned(), |v| format!("{v:.4}"));
    let mut stdout = std::io::stdout();
    writeln!(stdout, "graphs: {}", report.graphs.len())?;
    writeln!(stdout, "edge task accuracy: {}", show(report.edge_accuracy))?;
    writeln!(stdout, "node task accuracy: {}", show(report.node_accuracy))?;
    Ok(())
}
