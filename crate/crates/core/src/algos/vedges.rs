//! WL refinement over a random overlay: nodes learn their WL type from
//! their original neighbors in one exchange, then rank the types with the
//! distributed token-ranking pipeline routed over the overlay.

use super::sort::token_rank;
use super::token::{Backend, Router};
use crate::graph::{AttributedGraph, Word};
use crate::sim::{run, BudgetClass, NodeContext, NodeProgram, Round, RoundLog, SimConfig, StepBudget, Status};
use crate::wl::ColorVector;
use crate::{Error, Result};

/// Pads type keys; smaller than every color so padding sorts first.
const PAD: Word = -1;

/// Per-node steps allowed while routing: `kappa * Delta * ceil(log2 n)^2`.
pub fn vedges_budget() -> StepBudget {
    StepBudget::new(BudgetClass::DeltaLogSquared)
}

/// Key width shared by all nodes, `2 * Delta_G + 2`, where `Delta_G` is the
/// original graph's maximum degree.
pub fn type_key_len(g: &AttributedGraph) -> usize {
    2 * g.original_max_degree() + 2
}

struct Exchange<'a> {
    x: &'a [Word],
    key_len: usize,
}

impl NodeProgram for Exchange<'_> {
    type State = Option<Vec<Word>>;

    fn init(&self, _: &NodeContext<'_>) -> Self::State {
        None
    }

    fn on_round(&self, ctx: &NodeContext<'_>, key: &mut Self::State, round: &mut Round<'_>) -> Status {
        if round.number == 1 {
            let own = self.x[ctx.index];
            for v in ctx.original_neighbors().collect::<Vec<_>>() {
                round.push(v, own);
            }
            return Status::Active;
        }
        let mut colors: Vec<Word> =
            round.inbox.iter().filter(|&(from, _)| !ctx.is_overlay(from)).map(|(_, words)| words[0]).collect();
        round.meter.sort(&mut colors);
        let mut words = Vec::with_capacity(self.key_len);
        words.push(self.x[ctx.index]);
        words.extend(colors);
        words.resize(self.key_len, PAD);
        *key = Some(words);
        Status::Halt
    }
}

/// `g` must come from [`crate::graph::add_virtual_edges`]; node IDs, when
/// present, must be `0..n` in node order. Routes over the direct backend.
pub fn wl_virtual_edges(g: &AttributedGraph, x: &ColorVector, w: usize) -> Result<(ColorVector, RoundLog)> {
    wl_virtual_edges_with(g, x, w, Backend::Direct)
}

pub fn wl_virtual_edges_with(
    g: &AttributedGraph,
    x: &ColorVector,
    w: usize,
    backend: Backend,
) -> Result<(ColorVector, RoundLog)> {
    if !g.has_overlay() {
        return Err(Error::param("overlay missing: build the input with add_virtual_edges"));
    }
    x.check(g.n())?;
    if x.0.iter().any(|&c| c < 0) {
        return Err(Error::input("colors must be nonnegative"));
    }
    let key_len = type_key_len(g);
    let router = Router::new(g, backend, w)?.with_budget(vedges_budget());
    let mut log = router.setup_log().clone();

    let exchange = Exchange { x: &x.0, key_len };
    let cfg = SimConfig::new(w).with_budget(vedges_budget()).with_max_rounds(4);
    let (keys, exchange_log) = run(g, &exchange, cfg)?.completed()?;
    log.append("exchange", exchange_log);

    let keys: Vec<Vec<Vec<Word>>> = keys.into_iter().map(|k| vec![k.expect("every node halts with a key")]).collect();
    let ranked = token_rank(&router, &keys, 1)?;
    log.append("rank", ranked.log);
    let y = ranked.ranks.iter().map(|r| r[0] + 1).collect();
    Ok((ColorVector(y), log))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{add_virtual_edges, gen_erdos_renyi, gen_family, largest_component, Family};
    use crate::wl::wl_step_reference;

    #[test]
    fn cycle_stays_uniform() {
        let g = add_virtual_edges(&gen_family(Family::Cycle, 8).unwrap(), 0.5, 3).unwrap();
        let (y, _) = wl_virtual_edges(&g, &ColorVector::uniform(8), 4).unwrap();
        assert_eq!(y, ColorVector(vec![1; 8]));
    }

    #[test]
    fn missing_overlay_rejected() {
        let g = gen_family(Family::Cycle, 8).unwrap();
        assert!(wl_virtual_edges(&g, &ColorVector::uniform(8), 4).is_err());
    }

    #[test]
    fn random_graphs_match_reference_on_both_backends() {
        for seed in 0..4u64 {
            let base = gen_erdos_renyi(40, 5.0 / 40.0, seed).unwrap();
            let base = largest_component(&base);
            let n = base.n();
            let g = add_virtual_edges(&base, 1.0, seed).unwrap();
            let x = ColorVector((0..n).map(|u| (u % 3) as Word).collect());
            let want = wl_step_reference(&base, &x).unwrap();
            for backend in [Backend::Direct, Backend::Tree] {
                let (y, log) = wl_virtual_edges_with(&g, &x, 4, backend).unwrap();
                assert_eq!(y, want);
                let cap = vedges_budget().bound(g.n(), g.max_degree()).unwrap();
                assert!(log.peak_node_steps <= cap);
            }
        }
    }
}
