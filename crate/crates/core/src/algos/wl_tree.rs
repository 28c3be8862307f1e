//! Tree-based distributed WL refinement and centralized global computation.

use super::gather::{root_by_id, Gather, Resolve, TERM};
use crate::graph::{metrics, AttributedGraph, Word};
use crate::sim::{run, BudgetClass, NodeContext, RoundLog, SimConfig, StepBudget, StepMeter};
use crate::wl::ColorVector;
use crate::{Error, Result};

fn max_rounds(g: &AttributedGraph) -> usize {
    16 * (g.n() + 2 * g.m()) + 64
}

fn require_connected(g: &AttributedGraph) -> Result<()> {
    if g.n() == 0 || metrics(g).diameter.is_none() {
        return Err(Error::Disconnected);
    }
    Ok(())
}

/// Default configuration for [`wl_congest_with`]: `TIME(nΔ log n)` with the
/// default slack.
pub fn wl_congest_config(g: &AttributedGraph, w: usize) -> SimConfig {
    SimConfig::new(w)
        .with_budget(StepBudget::new(BudgetClass::NDeltaLogN))
        .with_max_rounds(max_rounds(g))
}

/// One WL step computed over a BFS tree rooted at the smallest ID: nodes
/// exchange colors, stream their types up a merging convergecast and receive
/// the dense rank of their type.
pub fn wl_congest(g: &AttributedGraph, x: &ColorVector, w: usize) -> Result<(ColorVector, RoundLog)> {
    wl_congest_with(g, x, wl_congest_config(g, w))
}

pub fn wl_congest_with(g: &AttributedGraph, x: &ColorVector, cfg: SimConfig) -> Result<(ColorVector, RoundLog)> {
    x.check(g.n())?;
    require_connected(g)?;
    let root = root_by_id(g)?;
    let hello = |ctx: &NodeContext<'_>| x.0[ctx.index];
    let item = |ctx: &NodeContext<'_>, hello: &[Word], meter: &mut StepMeter| {
        let mut colors: Vec<Word> = (0..ctx.degree()).filter(|&p| !ctx.overlay[p]).map(|p| hello[p]).collect();
        meter.sort(&mut colors);
        let mut item = Vec::with_capacity(colors.len() + 2);
        item.push(x.0[ctx.index]);
        item.extend(colors);
        item.push(TERM);
        item
    };
    let program = Gather { root, hello: &hello, item: &item, resolve: Resolve::Rank };
    let (states, log) = run(g, &program, cfg)?.completed()?;
    let y = states
        .iter()
        .map(|s| s.output.as_ref().map(|o| o[0]).ok_or_else(|| Error::Timeout { rounds: log.rounds }))
        .collect::<Result<Vec<_>>>()?;
    Ok((ColorVector(y), log))
}

fn zigzag(x: Word) -> Result<Word> {
    if x.unsigned_abs() >= 1 << 61 {
        return Err(Error::input(format!("feature {x} too large to encode")));
    }
    Ok(if x >= 0 { 2 * x } else { -2 * x - 1 })
}

fn unzigzag(z: Word) -> Word {
    if z % 2 == 0 {
        z / 2
    } else {
        -(z + 1) / 2
    }
}

/// Item layout: `[id, F, features.., d, neighbor ids.., TERM]`.
fn decode_graph(items: &[Vec<Word>]) -> Result<AttributedGraph> {
    let malformed = || Error::input("malformed topology record");
    let mut ids = Vec::with_capacity(items.len());
    let mut features = Vec::with_capacity(items.len());
    let mut adjacency = Vec::with_capacity(items.len());
    for item in items {
        let id = *item.first().ok_or_else(malformed)?;
        let f = *item.get(1).ok_or_else(malformed)? as usize;
        let feats: Vec<Word> = item.get(2..2 + f).ok_or_else(malformed)?.iter().map(|&z| unzigzag(z)).collect();
        let d = *item.get(2 + f).ok_or_else(malformed)? as usize;
        let nbrs = item.get(3 + f..3 + f + d).ok_or_else(malformed)?.to_vec();
        ids.push(id);
        features.push(feats);
        adjacency.push(nbrs);
    }
    let index = |id: Word| ids.binary_search(&id).map_err(|_| malformed());
    let mut edges = Vec::new();
    for (u, nbrs) in adjacency.iter().enumerate() {
        for &v in nbrs {
            let v = index(v)?;
            if u < v {
                edges.push((u, v));
            }
        }
    }
    AttributedGraph::new(items.len(), edges)?.with_features(features)?.with_labels(ids)
}

/// Gathers the whole topology (IDs, features, adjacency) at the root,
/// evaluates `f` there and sends each node its row of `f`'s output. Rows of
/// `f`'s output follow the reconstructed graph's node order, which sorts
/// nodes by ID.
pub fn global_compute<F>(g: &AttributedGraph, f: F, w: usize) -> Result<(Vec<Vec<Word>>, RoundLog)>
where
    F: Fn(&AttributedGraph) -> Result<Vec<Vec<Word>>> + Sync,
{
    require_connected(g)?;
    let root = root_by_id(g)?;
    for row in g.features() {
        for &x in row {
            zigzag(x)?;
        }
    }
    let hello = |ctx: &NodeContext<'_>| ctx.id;
    let item = |ctx: &NodeContext<'_>, _: &[Word], meter: &mut StepMeter| {
        let mut nbrs = ctx.neighbor_ids.clone();
        meter.sort(&mut nbrs);
        let mut item = vec![ctx.id, ctx.features.len() as Word];
        item.extend(ctx.features.iter().map(|&x| zigzag(x).expect("checked")));
        item.push(nbrs.len() as Word);
        item.extend(nbrs);
        item.push(TERM);
        item
    };
    let finish = |items: &[Vec<Word>]| -> Result<Vec<Vec<Word>>> {
        let topology = decode_graph(items)?;
        let rows = f(&topology)?;
        if rows.len() != topology.n() {
            return Err(Error::input(format!("{} result rows for {} nodes", rows.len(), topology.n())));
        }
        Ok(rows)
    };
    let program = Gather { root, hello: &hello, item: &item, resolve: Resolve::Deferred(&finish) };
    let outcome = run(g, &program, SimConfig::new(w).with_max_rounds(max_rounds(g)))?;
    if let Some(e) = &outcome.states[root].error {
        return Err(Error::input(format!("root computation failed: {e}")));
    }
    let (states, log) = outcome.completed()?;
    let rows = states
        .into_iter()
        .map(|s| s.output.ok_or(Error::Timeout { rounds: log.rounds }))
        .collect::<Result<Vec<_>>>()?;
    Ok((rows, log))
}
