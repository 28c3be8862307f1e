//! `report` (CSV summaries) and `scan` (round grids with a fitted model).

use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use serde_json::json;

use rlcongest::algos::{bounds, wl_congest, wl_virtual_node};
use rlcongest::graph::{add_virtual_node, assign_unique_ids, gen_family, gen_random_connected, metrics, Family};
use rlcongest::{AttributedGraph, ColorVector, Word};

use crate::output::Outputs;
use crate::{CmdResult, Violation};

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Columns to group rows by.
    #[arg(long, value_delimiter = ',')]
    pub group_by: Vec<String>,
    #[arg(long, default_value = "summary.csv")]
    pub name: String,
}

#[derive(Debug, Default, Clone, Copy)]
struct Stats {
    count: usize,
    min: f64,
    max: f64,
    sum: f64,
}

impl Stats {
    fn add(&mut self, v: f64) {
        if self.count == 0 {
            self.min = v;
            self.max = v;
        }
        self.count += 1;
        self.min = self.min.min(v);
        self.max = self.max.max(v);
        self.sum += v;
    }
}

/// Per group and numeric column: count, min, max, mean. Columns with any
/// non-numeric value are skipped.
pub fn report(a: &ReportArgs, out: &mut Outputs) -> CmdResult {
    let mut reader = csv::Reader::from_path(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    let headers: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    let group_idx: Vec<usize> = a
        .group_by
        .iter()
        .map(|c| headers.iter().position(|h| h == c).with_context(|| format!("no column named {c:?}")))
        .collect::<Result<_>>()?;
    let value_idx: Vec<usize> = (0..headers.len()).filter(|i| !group_idx.contains(i)).collect();
    let mut numeric = vec![true; headers.len()];
    let mut groups: BTreeMap<Vec<String>, Vec<Stats>> = BTreeMap::new();
    for record in reader.records() {
        let record = record?;
        let key: Vec<String> = group_idx.iter().map(|&i| record.get(i).unwrap_or("").to_owned()).collect();
        let stats = groups.entry(key).or_insert_with(|| vec![Stats::default(); headers.len()]);
        for &i in &value_idx {
            match record.get(i).and_then(|s| s.trim().parse::<f64>().ok()) {
                Some(v) => stats[i].add(v),
                None => numeric[i] = false,
            }
        }
    }
    let mut csv = csv::Writer::from_writer(out.create(&a.name)?);
    let mut header: Vec<String> = a.group_by.clone();
    header.extend(["column", "count", "min", "max", "mean"].map(String::from));
    csv.write_record(&header)?;
    println!("{}", header.join("\t"));
    for (key, stats) in &groups {
        for &i in value_idx.iter().filter(|&&i| numeric[i]) {
            let s = stats[i];
            let mut row = key.clone();
            let mean = if s.count > 0 { s.sum / s.count as f64 } else { f64::NAN };
            row.extend([headers[i].clone(), s.count.to_string(), s.min.to_string(), s.max.to_string(), format!("{mean:.4}")]);
            println!("{}", row.join("\t"));
            csv.write_record(&row)?;
        }
    }
    csv.flush()?;
    out.set_summary(json!({ "input": a.input, "groups": groups.len() }))?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanAlgo {
    Wl,
    Vnode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanFamily {
    /// Random connected graph with `m = factor * n` edges (`factor 0` = tree).
    Connected,
    Star,
    Path,
    Cycle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanColors {
    Uniform,
    Distinct,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, value_enum)]
    pub algo: ScanAlgo,
    #[arg(long, value_enum, default_value = "connected")]
    pub family: ScanFamily,
    #[arg(long, value_delimiter = ',', num_args = 0.., default_values_t = [16, 32, 64])]
    pub n: Vec<usize>,
    /// Edge factors for `connected`: m = factor * n, 0 = spanning tree.
    #[arg(long, value_delimiter = ',', num_args = 0.., default_values_t = [0, 2, 4, 8])]
    pub m_factor: Vec<usize>,
    #[arg(long, value_delimiter = ',', num_args = 0.., default_values_t = [1, 2, 4, 8])]
    pub w: Vec<usize>,
    /// Graphs per (n, m) cell.
    #[arg(long, default_value_t = 3)]
    pub seeds: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "uniform")]
    pub colors: ScanColors,
}

#[derive(Debug, Clone, Serialize)]
struct Cell {
    algo: &'static str,
    n: usize,
    m: usize,
    w: usize,
    seed: u64,
    diameter: usize,
    max_degree: usize,
    rounds: usize,
    bound: usize,
    within_bound: bool,
}

/// Least squares `rounds = coef . features`; `None` when underdetermined.
fn fit(rows: &[(Vec<f64>, f64)]) -> Option<Vec<f64>> {
    let k = rows.first()?.0.len();
    if rows.len() < k {
        return None;
    }
    let x = DMatrix::from_fn(rows.len(), k, |i, j| rows[i].0[j]);
    let y = DVector::from_iterator(rows.len(), rows.iter().map(|r| r.1));
    let svd = x.svd(true, true);
    svd.solve(&y, 1e-9).ok().map(|c| c.iter().copied().collect())
}

fn scan_graph(a: &ScanArgs, n: usize, factor: usize, seed: u64) -> Result<AttributedGraph> {
    let g = match a.family {
        ScanFamily::Connected => {
            let m = if factor == 0 { n - 1 } else { (factor * n).min(n * (n - 1) / 2) };
            gen_random_connected(n, m, seed)?
        }
        ScanFamily::Star => gen_family(Family::Star, n)?,
        ScanFamily::Path => gen_family(Family::Path, n)?,
        ScanFamily::Cycle => gen_family(Family::Cycle, n)?,
    };
    Ok(assign_unique_ids(&g))
}

pub fn scan(a: &ScanArgs, out: &mut Outputs) -> CmdResult {
    out.set_seed(a.seed);
    if a.n.iter().any(|&n| !(2..=256).contains(&n)) || a.w.contains(&0) {
        bail!("scan grid limited to 2 <= n <= 256 and w >= 1");
    }
    let factors: Vec<usize> = if a.family == ScanFamily::Connected { a.m_factor.clone() } else { vec![0] };
    let mut cells = Vec::new();
    let mut csv = csv::WriterBuilder::new().has_headers(false).from_writer(out.create("scan.csv")?);
    csv.write_record(["algo", "n", "m", "w", "seed", "diameter", "max_degree", "rounds", "bound", "within_bound"])?;
    let name = match a.algo {
        ScanAlgo::Wl => "wl",
        ScanAlgo::Vnode => "vnode",
    };
    for &n in &a.n {
        for &factor in &factors {
            for s in 0..a.seeds {
                let seed = a.seed.wrapping_add(s);
                let g = scan_graph(a, n, factor, seed)?;
                let x = match a.colors {
                    ScanColors::Uniform => ColorVector::uniform(n),
                    ScanColors::Distinct => ColorVector((0..n as Word).collect()),
                };
                let m = metrics(&g);
                for &w in &a.w {
                    let (rounds, bound) = match a.algo {
                        ScanAlgo::Wl => (wl_congest(&g, &x, w)?.1.rounds, bounds::wl_congest_bound(&g, w)),
                        ScanAlgo::Vnode => {
                            (wl_virtual_node(&add_virtual_node(&g), &x, w)?.1.rounds, bounds::vnode_bound(m.max_degree, w))
                        }
                    };
                    let cell = Cell {
                        algo: name,
                        n,
                        m: g.m(),
                        w,
                        seed,
                        diameter: m.diameter.unwrap_or(0),
                        max_degree: m.max_degree,
                        rounds,
                        bound,
                        within_bound: rounds <= bound,
                    };
                    csv.serialize(&cell)?;
                    csv.flush()?;
                    cells.push(cell);
                }
            }
        }
    }
    let (model, frozen, rows): (&str, serde_json::Value, Vec<(Vec<f64>, f64)>) = match a.algo {
        ScanAlgo::Wl => (
            "rounds = a*D + b*m/w + c",
            json!({ "a": bounds::WL_CONGEST.a, "b": bounds::WL_CONGEST.b, "c": bounds::WL_CONGEST.c }),
            cells.iter().map(|c| (vec![c.diameter as f64, c.m as f64 / c.w as f64, 1.0], c.rounds as f64)).collect(),
        ),
        ScanAlgo::Vnode => (
            "rounds = a*ceil(Delta/w) + c",
            json!({ "a": bounds::VNODE_SLOPE, "c": bounds::VNODE_OFFSET }),
            cells.iter().map(|c| (vec![c.max_degree.div_ceil(c.w) as f64, 1.0], c.rounds as f64)).collect(),
        ),
    };
    let coefficients = fit(&rows);
    let violations: Vec<&Cell> = cells.iter().filter(|c| !c.within_bound).collect();
    let summary = json!({
        "algo": name,
        "cells": cells.len(),
        "violations": violations.len(),
        "model": model,
        "fitted": coefficients,
        "frozen": frozen,
    });
    serde_json::to_writer_pretty(out.create("scan_summary.json")?, &summary)?;
    out.set_summary(&summary)?;
    let fitted = match &coefficients {
        Some(c) => c.iter().map(|v| format!("{v:.3}")).collect::<Vec<_>>().join(", "),
        None => "underdetermined".to_string(),
    };
    println!("{} cells, {} over the bound; fit {model}: [{fitted}]", cells.len(), violations.len());
    if let Some(c) = violations.first() {
        return Err(Violation(format!(
            "{} cell(s) exceed the bound, first n={} m={} w={} seed={}: {} > {}",
            violations.len(),
            c.n,
            c.m,
            c.w,
            c.seed,
            c.rounds,
            c.bound
        ))
        .into());
    }
    Ok(())
}
