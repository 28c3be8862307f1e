//! Graph file formats.
//!
//! Text: a header line `n m` followed by `m` lines `u v` with `u < v`,
//! ascending. JSON: the serde form of [`AttributedGraph`] (`n`, `edges`,
//! `features`, `labels`, plus overlay markers when present).

use std::io::{BufRead, Write};
use std::path::Path;

use super::AttributedGraph;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    Text,
    Json,
}

impl GraphFormat {
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => GraphFormat::Json,
            _ => GraphFormat::Text,
        }
    }
}

pub fn read_graph_text(reader: impl BufRead) -> Result<AttributedGraph> {
    let mut lines = reader
        .lines()
        .map(|l| l.map_err(Error::from))
        .filter(|l| l.as_ref().map_or(true, |s| !s.trim().is_empty()));
    let header = lines.next().ok_or_else(|| Error::Format("empty graph file".into()))??;
    let [n, m] = parse_pair(&header, 1)?;
    let mut edges = Vec::with_capacity(m);
    for (i, line) in lines.enumerate() {
        let [u, v] = parse_pair(&line?, i + 2)?;
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(Error::Format(format!("header promises {m} edges, found {}", edges.len())));
    }
    AttributedGraph::new(n, edges)
}

fn parse_pair(line: &str, lineno: usize) -> Result<[usize; 2]> {
    let mut it = line.split_whitespace().map(str::parse::<usize>);
    match (it.next(), it.next(), it.next()) {
        (Some(Ok(a)), Some(Ok(b)), None) => Ok([a, b]),
        _ => Err(Error::Format(format!("line {lineno}: expected two integers, got `{line}`"))),
    }
}

pub fn write_graph_text(g: &AttributedGraph, mut out: impl Write) -> Result<()> {
    writeln!(out, "{} {}", g.n(), g.m())?;
    for &(u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}

pub fn read_graph_json(reader: impl std::io::Read) -> Result<AttributedGraph> {
    let g: AttributedGraph = serde_json::from_reader(reader)?;
    g.finish_loaded()
}

pub fn write_graph_json(g: &AttributedGraph, out: impl Write) -> Result<()> {
    serde_json::to_writer_pretty(out, g)?;
    Ok(())
}

/// Reads either format, chosen by extension.
pub fn read_graph(path: &Path) -> Result<AttributedGraph> {
    let file = std::io::BufReader::new(std::fs::File::open(path)?);
    match GraphFormat::from_path(path) {
        GraphFormat::Json => read_graph_json(file),
        GraphFormat::Text => read_graph_text(file),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{add_virtual_edges, gen_family, Family};

    #[test]
    fn text_round_trip() {
        let g = gen_family(Family::Cycle, 5).unwrap();
        let mut buf = Vec::new();
        write_graph_text(&g, &mut buf).unwrap();
        assert!(String::from_utf8_lossy(&buf).starts_with("5 5\n0 1\n0 4\n"));
        assert_eq!(read_graph_text(&buf[..]).unwrap(), g);
    }

    #[test]
    fn json_keeps_features_labels_and_overlay() {
        let g = gen_family(Family::Path, 6)
            .unwrap()
            .with_features((0..6).map(|u| vec![u % 2]).collect())
            .unwrap();
        let g = add_virtual_edges(&crate::graph::assign_unique_ids(&g), 1.0, 2).unwrap();
        let mut buf = Vec::new();
        write_graph_json(&g, &mut buf).unwrap();
        assert_eq!(read_graph_json(&buf[..]).unwrap(), g);
    }

    #[test]
    fn malformed_text_rejected() {
        assert!(read_graph_text(&b"3 2\n0 1\n"[..]).is_err());
        assert!(read_graph_text(&b"3 1\n0 x\n"[..]).is_err());
        assert!(read_graph_text(&b""[..]).is_err());
        assert!(read_graph_text(&b"2 1\n0 5\n"[..]).is_err());
    }
}
