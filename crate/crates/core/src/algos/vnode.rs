//! WL refinement through a virtual node adjacent to every original node.
//!
//! Round 1: original nodes broadcast their color; the virtual node sends a
//! notification word that identifies it. Each original node then uploads
//! `[d, x_u, sorted neighbor colors]` to the virtual node, which ranks the
//! types once all records are complete and returns one rank word per node.

use super::ports::Ports;
use crate::graph::{AttributedGraph, Word, VIRTUAL_MARKER};
use crate::sim::{run, BudgetClass, NodeContext, NodeProgram, OpKind, Round, RoundLog, SimConfig, StepBudget, Status};
use crate::wl::ColorVector;
use crate::{Error, Result};

const NOTIFY: Word = -1;

struct VirtualNode<'a> {
    hub: usize,
    x: &'a [Word],
}

#[derive(Debug, Default)]
struct VState {
    ports: Ports,
    hub_port: Option<usize>,
    colors: Vec<Option<Word>>,
    uploaded: bool,
    // hub only
    records: Vec<Option<Vec<Word>>>,
    ranked: bool,
    y: Option<Word>,
}

impl VirtualNode<'_> {
    fn hub_round(&self, ctx: &NodeContext<'_>, st: &mut VState, round: &mut Round<'_>) -> Status {
        if round.number == 1 {
            st.ports.enqueue_all(NOTIFY);
        }
        for p in 0..ctx.degree() {
            if st.records[p].is_some() {
                continue;
            }
            // stream: [x broadcast, d, x, colors..]
            let inc = &st.ports.inc[p];
            if inc.len() >= 2 && inc.len() >= 3 + inc[1] as usize {
                let d = inc[1] as usize;
                let record: Vec<Word> = inc.iter().skip(2).take(d + 1).copied().collect();
                st.records[p] = Some(record);
                st.ports.inc[p].clear();
            }
        }
        if !st.ranked && st.records.iter().all(Option::is_some) {
            let mut order: Vec<usize> = (0..ctx.degree()).collect();
            let records: Vec<&Vec<Word>> = st.records.iter().map(|r| r.as_ref().expect("complete")).collect();
            round.meter.sort_by(&mut order, |m, &a, &b| m.compare_words(records[a], records[b]));
            let mut rank = 0;
            for (i, &p) in order.iter().enumerate() {
                if i == 0 || round.meter.compare_words(records[order[i - 1]], records[p]).is_ne() {
                    rank += 1;
                }
                st.ports.enqueue(p, [rank]);
            }
            st.ranked = true;
        }
        st.ports.flush(ctx, round);
        if st.ranked && st.ports.out_empty() {
            Status::Halt
        } else {
            Status::Active
        }
    }

    fn member_round(&self, ctx: &NodeContext<'_>, st: &mut VState, round: &mut Round<'_>) -> Status {
        if round.number == 1 {
            st.ports.enqueue_all(self.x[ctx.index]);
        }
        for p in 0..ctx.degree() {
            if st.colors[p].is_none() {
                if let Some(word) = st.ports.inc[p].pop_front() {
                    if word == NOTIFY {
                        st.hub_port = Some(p);
                    }
                    st.colors[p] = Some(word);
                }
            }
        }
        if !st.uploaded && st.colors.iter().all(Option::is_some) {
            if let Some(hub) = st.hub_port {
                let mut colors: Vec<Word> =
                    (0..ctx.degree()).filter(|&p| p != hub).map(|p| st.colors[p].expect("known")).collect();
                round.meter.sort(&mut colors);
                st.ports.enqueue(hub, [colors.len() as Word, self.x[ctx.index]]);
                st.ports.enqueue(hub, colors);
                st.uploaded = true;
            }
        }
        if let Some(hub) = st.hub_port {
            if let Some(rank) = st.ports.inc[hub].pop_front() {
                round.meter.charge(OpKind::Write);
                st.y = Some(rank);
            }
        }
        st.ports.flush(ctx, round);
        if st.y.is_some() && st.ports.out_empty() {
            Status::Halt
        } else {
            Status::Active
        }
    }
}

impl NodeProgram for VirtualNode<'_> {
    type State = VState;

    fn init(&self, ctx: &NodeContext<'_>) -> VState {
        VState {
            ports: Ports::new(ctx.degree()),
            colors: vec![None; ctx.degree()],
            records: vec![None; ctx.degree()],
            ..Default::default()
        }
    }

    fn on_round(&self, ctx: &NodeContext<'_>, st: &mut VState, round: &mut Round<'_>) -> Status {
        st.ports.absorb(ctx, round.inbox);
        if ctx.index == self.hub {
            self.hub_round(ctx, st, round)
        } else {
            self.member_round(ctx, st, round)
        }
    }
}

/// Locates the marked virtual node of a graph built by
/// [`crate::graph::add_virtual_node`].
fn hub_of(g: &AttributedGraph) -> Result<usize> {
    let missing = || Error::param("virtual node marker missing");
    let hub = g.virtual_node().ok_or_else(missing)?;
    if g.features()[hub].last() != Some(&VIRTUAL_MARKER) || g.degree(hub) + 1 != g.n() {
        return Err(missing());
    }
    Ok(hub)
}

/// `x` colors the original nodes (all nodes except the virtual one, in
/// order). Returns their new colors.
pub fn wl_virtual_node(g: &AttributedGraph, x: &ColorVector, w: usize) -> Result<(ColorVector, RoundLog)> {
    let hub = hub_of(g)?;
    x.check(g.n() - 1)?;
    let mut full = x.0.clone();
    full.insert(hub, 0);
    let program = VirtualNode { hub, x: &full };
    let cfg = SimConfig::new(w)
        .with_budget(StepBudget::new(BudgetClass::NDeltaLogN))
        .with_max_rounds(4 * g.n() + 64);
    let (states, log) = run(g, &program, cfg)?.completed()?;
    let y = (0..g.n())
        .filter(|&u| u != hub)
        .map(|u| states[u].y.expect("completed run assigns every color"))
        .collect();
    Ok((ColorVector(y), log))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algos::bounds::vnode_bound;
    use crate::graph::{add_virtual_node, gen_erdos_renyi, gen_family, Family};
    use crate::wl::wl_step_reference;

    #[test]
    fn star_with_wide_edges() {
        let n = 12;
        let g = gen_family(Family::Star, n).unwrap();
        let (y, log) = wl_virtual_node(&add_virtual_node(&g), &ColorVector::uniform(n), n).unwrap();
        assert_eq!(y, wl_step_reference(&g, &ColorVector::uniform(n)).unwrap());
        assert!(log.rounds <= 2 + 6, "rounds {}", log.rounds);
    }

    #[test]
    fn path3() {
        let g = gen_family(Family::Path, 3).unwrap();
        let (y, _) = wl_virtual_node(&add_virtual_node(&g), &ColorVector::uniform(3), 1).unwrap();
        assert_eq!(y.0, vec![1, 2, 1]);
    }

    #[test]
    fn rounds_ignore_diameter() {
        let p = add_virtual_node(&gen_family(Family::Path, 100).unwrap());
        let c = add_virtual_node(&gen_family(Family::Cycle, 100).unwrap());
        for w in [1, 2, 3] {
            let rp = wl_virtual_node(&p, &ColorVector::uniform(100), w).unwrap().1.rounds;
            let rc = wl_virtual_node(&c, &ColorVector::uniform(100), w).unwrap().1.rounds;
            assert!(rp.abs_diff(rc) <= 1);
        }
    }

    #[test]
    fn random_graphs_match_reference() {
        for seed in 0..20 {
            let g = gen_erdos_renyi(30, 0.15, seed).unwrap();
            let x = ColorVector((0..30).map(|u| (u * seed as Word) % 5).collect());
            let w = 1 + seed as usize % 3;
            let (y, log) = wl_virtual_node(&add_virtual_node(&g), &x, w).unwrap();
            assert_eq!(y, wl_step_reference(&g, &x).unwrap());
            assert!(log.rounds <= vnode_bound(g.max_degree(), w));
        }
    }

    #[test]
    fn unmarked_graph_rejected() {
        let g = gen_family(Family::Star, 5).unwrap();
        assert!(wl_virtual_node(&g, &ColorVector::uniform(4), 1).is_err());
    }
}
