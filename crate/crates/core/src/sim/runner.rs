use rayon::prelude::*;

use super::{Inbox, NodeContext, NodeProgram, Outbox, Round, RoundLog, Status, StepBudget, StepMeter};
use super::{EdgeCount, NodeSteps, OpKind};
use crate::graph::{AttributedGraph, Word};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    pub width: usize,
    pub budget: StepBudget,
    pub max_rounds: usize,
    /// Worker threads for `on_round` calls; 1 runs inline.
    pub threads: usize,
}

impl SimConfig {
    pub fn new(width: usize) -> Self {
        SimConfig { width, budget: StepBudget::UNLIMITED, max_rounds: 1_000_000, threads: 1 }
    }

    pub fn with_budget(self, budget: StepBudget) -> Self {
        SimConfig { budget, ..self }
    }

    pub fn with_max_rounds(self, max_rounds: usize) -> Self {
        SimConfig { max_rounds, ..self }
    }

    pub fn with_threads(self, threads: usize) -> Self {
        SimConfig { threads, ..self }
    }
}

#[derive(Debug)]
pub struct RunOutcome<S> {
    pub states: Vec<S>,
    pub log: RoundLog,
    /// `max_rounds` elapsed before termination; `log` covers the partial run.
    pub timed_out: bool,
}

impl<S> RunOutcome<S> {
    /// Converts a timeout into [`Error::Timeout`].
    pub fn completed(self) -> Result<(Vec<S>, RoundLog)> {
        if self.timed_out {
            Err(Error::Timeout { rounds: self.log.rounds })
        } else {
            Ok((self.states, self.log))
        }
    }
}

struct NodeResult {
    status: Status,
    outbox: Outbox,
    steps: u64,
}

fn contexts(g: &AttributedGraph, width: usize) -> Vec<NodeContext<'_>> {
    let id = |u: usize| g.labels().map_or(u as Word, |l| l[u]);
    (0..g.n())
        .map(|u| NodeContext {
            index: u,
            id: id(u),
            n: g.n(),
            width,
            neighbors: g.neighbors(u),
            overlay: g.neighbors(u).iter().map(|&v| g.is_virtual_edge(u, v)).collect(),
            neighbor_ids: g.neighbors(u).iter().map(|&v| id(v)).collect(),
            features: &g.features()[u],
        })
        .collect()
}

fn step_node<P: NodeProgram>(
    program: &P,
    ctx: &NodeContext<'_>,
    state: &mut P::State,
    inbox: &Inbox,
    number: usize,
) -> NodeResult {
    let mut meter = StepMeter::new();
    meter.charge_n(OpKind::Read, inbox.word_count());
    let mut outbox = Outbox::default();
    let status = program.on_round(ctx, state, &mut Round { number, inbox, outbox: &mut outbox, meter: &mut meter });
    meter.charge_n(OpKind::Write, outbox.word_count());
    NodeResult { status, outbox, steps: meter.steps() }
}

/// Executes `program` on `g`. Results are identical for every thread count:
/// nodes only see their own state and inbox, and all cross-node effects are
/// applied in ascending node order at the round boundary.
pub fn run<P: NodeProgram>(g: &AttributedGraph, program: &P, cfg: SimConfig) -> Result<RunOutcome<P::State>> {
    if cfg.width == 0 {
        return Err(Error::param("width must be at least 1"));
    }
    let pool = if cfg.threads > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(cfg.threads)
                .build()
                .map_err(|e| Error::Resource(e.to_string()))?,
        )
    } else {
        None
    };
    let n = g.n();
    let ctxs = contexts(g, cfg.width);
    let cap = cfg.budget.bound(n, g.max_degree());
    let mut states: Vec<P::State> = ctxs.iter().map(|c| program.init(c)).collect();
    let mut inboxes: Vec<Inbox> = vec![Inbox::default(); n];
    let mut halted = vec![false; n];
    let mut log = RoundLog::new(cfg.width);

    for number in 1..=cfg.max_rounds {
        let work = |(u, state): (usize, &mut P::State)| {
            (!halted[u]).then(|| step_node(program, &ctxs[u], state, &inboxes[u], number))
        };
        let results: Vec<Option<NodeResult>> = match &pool {
            Some(pool) => pool.install(|| states.par_iter_mut().enumerate().map(work).collect()),
            None => states.iter_mut().enumerate().map(work).collect(),
        };

        let mut next: Vec<Inbox> = vec![Inbox::default(); n];
        let mut words_this_round = 0usize;
        let mut quiet = true;
        for (u, result) in results.into_iter().enumerate() {
            let Some(r) = result else { continue };
            if let Some(cap) = cap {
                if r.steps > cap {
                    return Err(Error::Budget { round: number, node: u, steps: r.steps, cap });
                }
            }
            if r.steps > 0 {
                log.node_steps.push(NodeSteps { round: number, node: u, steps: r.steps });
                log.peak_node_steps = log.peak_node_steps.max(r.steps);
            }
            for (v, words) in r.outbox.into_entries() {
                if !g.has_edge(u, v) {
                    return Err(Error::NotNeighbor { round: number, from: u, to: v });
                }
                if words.len() > cfg.width {
                    return Err(Error::Bandwidth { round: number, from: u, to: v, words: words.len(), limit: cfg.width });
                }
                if words.is_empty() {
                    continue;
                }
                words_this_round += words.len();
                log.edge_words.push(EdgeCount { round: number, from: u, to: v, words: words.len() });
                next[v].push(u, words);
            }
            match r.status {
                Status::Halt => halted[u] = true,
                Status::Active => quiet = false,
                Status::Idle => {}
            }
        }
        for (v, inbox) in next.iter_mut().enumerate() {
            if halted[v] {
                *inbox = Inbox::default();
            }
        }
        inboxes = next;
        log.rounds = number;
        log.total_words += words_this_round as u64;
        if words_this_round > 0 {
            log.transmission_rounds += 1;
        }
        if halted.iter().all(|&h| h) || (quiet && words_this_round == 0) {
            return Ok(RunOutcome { states, log, timed_out: false });
        }
    }
    Ok(RunOutcome { states, log, timed_out: true })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_family, Family};
    use crate::sim::BudgetClass;

    struct Noop;
    impl NodeProgram for Noop {
        type State = ();
        fn init(&self, _: &NodeContext<'_>) {}
        fn on_round(&self, _: &NodeContext<'_>, _: &mut (), _: &mut Round<'_>) -> Status {
            Status::Halt
        }
    }

    /// Sends its ID to every neighbor in round 1, halts once all IDs arrived.
    struct Echo;
    impl NodeProgram for Echo {
        type State = Vec<Word>;
        fn init(&self, _: &NodeContext<'_>) -> Vec<Word> {
            Vec::new()
        }
        fn on_round(&self, ctx: &NodeContext<'_>, heard: &mut Vec<Word>, round: &mut Round<'_>) -> Status {
            if round.number == 1 {
                for &v in ctx.neighbors {
                    round.push(v, ctx.id);
                }
            }
            heard.extend(round.inbox.iter().flat_map(|(_, w)| w.iter().copied()));
            if heard.len() == ctx.degree() {
                Status::Halt
            } else {
                Status::Active
            }
        }
    }

    #[test]
    fn noop_takes_one_round() {
        let g = gen_family(Family::Cycle, 5).unwrap();
        let out = run(&g, &Noop, SimConfig::new(1)).unwrap();
        assert_eq!((out.log.rounds, out.log.total_words), (1, 0));
    }

    #[test]
    fn echo_on_triangle() {
        let g = gen_family(Family::Complete, 3).unwrap();
        let (states, log) = run(&g, &Echo, SimConfig::new(1)).unwrap().completed().unwrap();
        assert_eq!(log.rounds, 2);
        assert_eq!(log.max_edge_words(), 1);
        assert_eq!(log.total_words, 6);
        let mut heard = states[0].clone();
        heard.sort();
        assert_eq!(heard, vec![1, 2]);
    }

    struct Flooder(usize);
    impl NodeProgram for Flooder {
        type State = ();
        fn init(&self, _: &NodeContext<'_>) {}
        fn on_round(&self, ctx: &NodeContext<'_>, _: &mut (), round: &mut Round<'_>) -> Status {
            round.send(ctx.neighbors[0], &vec![0; self.0]);
            Status::Halt
        }
    }

    #[test]
    fn overflow_is_a_bandwidth_violation() {
        let g = gen_family(Family::Path, 3).unwrap();
        let err = run(&g, &Flooder(3), SimConfig::new(2)).unwrap_err();
        assert!(matches!(err, Error::Bandwidth { round: 1, from: 0, to: 1, words: 3, limit: 2 }));
        assert!(run(&g, &Flooder(2), SimConfig::new(2)).is_ok());
    }

    struct Spin;
    impl NodeProgram for Spin {
        type State = ();
        fn init(&self, _: &NodeContext<'_>) {}
        fn on_round(&self, _: &NodeContext<'_>, _: &mut (), round: &mut Round<'_>) -> Status {
            round.meter.charge_n(OpKind::WordOp, 1000);
            Status::Active
        }
    }

    #[test]
    fn budget_and_timeout() {
        let g = gen_family(Family::Path, 4).unwrap();
        let budget = StepBudget::new(BudgetClass::NLogN).with_kappa(1);
        let err = run(&g, &Spin, SimConfig::new(1).with_budget(budget)).unwrap_err();
        assert!(matches!(err, Error::Budget { round: 1, node: 0, .. }));
        let out = run(&g, &Spin, SimConfig::new(1).with_max_rounds(5)).unwrap();
        assert!(out.timed_out);
        assert_eq!(out.log.rounds, 5);
        assert!(matches!(out.completed(), Err(Error::Timeout { rounds: 5 })));
    }

    struct Stranger;
    impl NodeProgram for Stranger {
        type State = ();
        fn init(&self, _: &NodeContext<'_>) {}
        fn on_round(&self, ctx: &NodeContext<'_>, _: &mut (), round: &mut Round<'_>) -> Status {
            round.push((ctx.index + 2) % ctx.n, 1);
            Status::Halt
        }
    }

    #[test]
    fn non_neighbor_rejected() {
        let g = gen_family(Family::Path, 4).unwrap();
        assert!(matches!(
            run(&g, &Stranger, SimConfig::new(1)).unwrap_err(),
            Error::NotNeighbor { round: 1, from: 0, to: 2 }
        ));
    }
}
