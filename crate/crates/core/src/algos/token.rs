//! Fixed-width token records and the routing phase that moves them.
//!
//! A phase is one simulator run. In its first round every node applies a
//! local action to the tokens it holds (metered like any other node work)
//! and emits outgoing tokens; the phase then forwards tokens until the
//! network is quiet. Tokens travel as `[dst, tag, src, rank, key...]`.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, VecDeque};
use std::str::FromStr;

use super::ports::Ports;
use super::tree::{flood_bfs, SpanningTree};
use crate::graph::{bfs_distances, AttributedGraph, Word};
use crate::sim::{run, NodeContext, NodeProgram, Round, RoundLog, SimConfig, Status, StepBudget, StepMeter};
use crate::sim::ceil_log2;
use crate::{Error, Result};

/// Rank field of a token that has not been ranked.
pub const NO_RANK: Word = -1;

/// Words preceding the key on the wire.
const HEADER: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Token {
    pub key: Vec<Word>,
    /// Unique per token; `src * L + seq` for generated tags.
    pub tag: Word,
    pub src: Word,
    pub rank: Word,
    pub dst: Word,
}

impl Token {
    pub fn new(key: Vec<Word>, tag: Word, src: Word, dst: Word) -> Self {
        Token { key, tag, src, rank: NO_RANK, dst }
    }

    fn encode(&self, out: &mut VecDeque<Word>) {
        out.extend([self.dst, self.tag, self.src, self.rank]);
        out.extend(self.key.iter().copied());
    }

    fn decode(words: &[Word]) -> Self {
        Token { dst: words[0], tag: words[1], src: words[2], rank: words[3], key: words[HEADER..].to_vec() }
    }
}

/// Wire width of a token with `key_len` key words.
pub fn token_width(key_len: usize) -> usize {
    HEADER + key_len
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    /// Upcast to the BFS root, then broadcast down the tree.
    Tree,
    /// Shortest-path forwarding with per-edge priority queues.
    Direct,
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tree" => Ok(Backend::Tree),
            "direct" => Ok(Backend::Direct),
            other => Err(Error::param(format!("unknown routing backend {other:?} (tree|direct)"))),
        }
    }
}

/// Routing substrate over a connected graph whose node IDs are `0..n` in
/// node order.
#[derive(Debug, Clone)]
pub struct Router<'g> {
    g: &'g AttributedGraph,
    backend: Backend,
    width: usize,
    budget: StepBudget,
    threads: usize,
    tree: Option<SpanningTree>,
    /// `next_hop[u][dst]`: neighbor of `u` on a shortest path to `dst`.
    next_hop: Vec<Vec<u32>>,
    setup: RoundLog,
}

impl<'g> Router<'g> {
    /// The tree backend builds its BFS tree by flooding from ID 0 (logged in
    /// [`Router::setup_log`]); the direct backend's next-hop tables are
    /// preprocessing and cost no rounds.
    pub fn new(g: &'g AttributedGraph, backend: Backend, width: usize) -> Result<Self> {
        if width == 0 {
            return Err(Error::param("width must be at least 1"));
        }
        if g.n() == 0 {
            return Err(Error::param("routing needs at least one node"));
        }
        if let Some(labels) = g.labels() {
            if labels.iter().enumerate().any(|(u, &id)| id != u as Word) {
                return Err(Error::param("routing needs node IDs 0..n in node order"));
            }
        }
        let mut router = Router {
            g,
            backend,
            width,
            budget: StepBudget::UNLIMITED,
            threads: 1,
            tree: None,
            next_hop: Vec::new(),
            setup: RoundLog::new(width),
        };
        match backend {
            Backend::Tree => {
                let (tree, log) = flood_bfs(g, 0, width).map_err(|e| match e {
                    Error::Timeout { .. } => Error::Disconnected,
                    other => other,
                })?;
                router.tree = Some(tree);
                router.setup.append("flood", log);
            }
            Backend::Direct => router.next_hop = next_hops(g)?,
        }
        Ok(router)
    }

    pub fn with_budget(mut self, budget: StepBudget) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    pub fn graph(&self) -> &AttributedGraph {
        self.g
    }

    pub fn n(&self) -> usize {
        self.g.n()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    /// Rounds spent building the routing structure.
    pub fn setup_log(&self) -> &RoundLog {
        &self.setup
    }

    /// Runs one phase. `action` sees the holding of a node in round 1 and
    /// returns the tokens to send; tokens delivered during the phase are
    /// appended to `arrived`.
    pub(crate) fn phase(
        &self,
        holdings: Vec<Holding>,
        key_len: usize,
        action: &Action<'_>,
    ) -> Result<(Vec<Holding>, RoundLog)> {
        let n = self.n();
        // Each token crosses at most n edges; a queue of at most all tokens
        // can delay it by that many tokens.
        let tokens: usize = holdings.iter().map(|h| h.resident.len() + h.arrived.len()).sum();
        let per_token = token_width(key_len).div_ceil(self.width);
        let max_rounds = (2 * n + 4) * (1 + per_token * (tokens + 1)) + 16;
        let program = Phase { router: self, key_len, initial: holdings, action };
        let cfg = SimConfig::new(self.width)
            .with_budget(self.budget)
            .with_max_rounds(max_rounds)
            .with_threads(self.threads);
        let (states, log) = run(self.g, &program, cfg)?.completed()?;
        Ok((states.into_iter().map(|s| s.hold).collect(), log))
    }
}

fn next_hops(g: &AttributedGraph) -> Result<Vec<Vec<u32>>> {
    let n = g.n();
    let mut table = vec![vec![0u32; n]; n];
    for dst in 0..n {
        let dist = bfs_distances(g, dst);
        for u in 0..n {
            let Some(d) = dist[u] else { return Err(Error::Disconnected) };
            table[u][dst] = if d == 0 {
                u as u32
            } else {
                let hop = g.neighbors(u).iter().find(|&&v| dist[v] == Some(d - 1)).expect("BFS predecessor");
                *hop as u32
            };
        }
    }
    Ok(table)
}

/// Tokens at one node: `resident` is the node's sorted working set,
/// `arrived` what was delivered in the last phase.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Holding {
    pub resident: Vec<Token>,
    pub arrived: Vec<Token>,
}

pub(crate) type Action<'a> = dyn Fn(usize, &mut Holding, &mut StepMeter) -> Vec<Token> + Sync + 'a;

struct Phase<'r, 'g, 'a> {
    router: &'r Router<'g>,
    key_len: usize,
    initial: Vec<Holding>,
    action: &'a Action<'a>,
}

struct PhaseState {
    hold: Holding,
    ports: Ports,
    /// Tokens waiting per port, highest priority = smallest `(tag, src)`.
    queues: Vec<BinaryHeap<Reverse<(Word, Word, usize)>>>,
    parked: Vec<Option<Token>>,
    parent_port: Option<usize>,
    child_ports: Vec<usize>,
}

impl PhaseState {
    fn enqueue(&mut self, port: usize, token: Token, meter: &mut StepMeter) {
        meter.charge_n(crate::sim::OpKind::Compare, ceil_log2(self.queues[port].len() as u64 + 1) as usize);
        let slot = self.parked.len();
        self.queues[port].push(Reverse((token.tag, token.src, slot)));
        self.parked.push(Some(token));
    }
}

impl Phase<'_, '_, '_> {
    fn width(&self) -> usize {
        token_width(self.key_len)
    }

    /// `from_parent` is set for tokens moving down the tree.
    fn dispatch(&self, ctx: &NodeContext<'_>, st: &mut PhaseState, token: Token, from_parent: bool, meter: &mut StepMeter) {
        let me = ctx.index;
        if token.dst == me as Word {
            st.hold.arrived.push(token);
            return;
        }
        match self.router.backend {
            Backend::Direct => {
                let hop = self.router.next_hop[me][token.dst as usize] as usize;
                st.enqueue(Ports::port(ctx, hop), token, meter);
            }
            Backend::Tree => match st.parent_port {
                Some(up) if !from_parent => st.enqueue(up, token, meter),
                _ => {
                    for i in 0..st.child_ports.len() {
                        let port = st.child_ports[i];
                        st.enqueue(port, token.clone(), meter);
                    }
                }
            },
        }
    }

    fn transmit(&self, ctx: &NodeContext<'_>, st: &mut PhaseState, round: &mut Round<'_>) {
        for port in 0..ctx.degree() {
            while st.ports.out[port].len() < ctx.width {
                let Some(Reverse((_, _, slot))) = st.queues[port].pop() else { break };
                let token = st.parked[slot].take().expect("queued token is parked");
                token.encode(&mut st.ports.out[port]);
            }
        }
        st.ports.flush(ctx, round);
    }
}

impl NodeProgram for Phase<'_, '_, '_> {
    type State = PhaseState;

    fn init(&self, ctx: &NodeContext<'_>) -> PhaseState {
        let (parent_port, child_ports) = match &self.router.tree {
            Some(tree) => (
                tree.parent[ctx.index].map(|p| Ports::port(ctx, p)),
                tree.children(ctx.index).into_iter().map(|c| Ports::port(ctx, c)).collect(),
            ),
            None => (None, Vec::new()),
        };
        PhaseState {
            hold: self.initial[ctx.index].clone(),
            ports: Ports::new(ctx.degree()),
            queues: vec![BinaryHeap::new(); ctx.degree()],
            parked: Vec::new(),
            parent_port,
            child_ports,
        }
    }

    fn on_round(&self, ctx: &NodeContext<'_>, st: &mut PhaseState, round: &mut Round<'_>) -> Status {
        if round.number == 1 {
            let outgoing = (self.action)(ctx.index, &mut st.hold, round.meter);
            for token in outgoing {
                debug_assert_eq!(token.key.len(), self.key_len);
                self.dispatch(ctx, st, token, false, round.meter);
            }
        }
        st.ports.absorb(ctx, round.inbox);
        let tw = self.width();
        for port in 0..ctx.degree() {
            while st.ports.inc[port].len() >= tw {
                let words: Vec<Word> = st.ports.inc[port].drain(..tw).collect();
                let from_parent = st.parent_port == Some(port);
                self.dispatch(ctx, st, Token::decode(&words), from_parent, round.meter);
            }
        }
        self.transmit(ctx, st, round);
        let busy = !st.ports.out_empty() || st.queues.iter().any(|q| !q.is_empty());
        if busy {
            Status::Active
        } else {
            Status::Idle
        }
    }
}

/// Moves every token to the node whose ID is its `dst`. At most `cap`
/// tokens may start at a node or share a destination.
pub fn expander_route(router: &Router<'_>, tokens: Vec<Vec<Token>>, cap: usize) -> Result<(Vec<Vec<Token>>, RoundLog)> {
    let n = router.n();
    if tokens.len() != n {
        return Err(Error::input(format!("expected token lists for {n} nodes, got {}", tokens.len())));
    }
    let key_len = check_tokens(&tokens, cap)?;
    let mut per_dst = vec![0usize; n];
    for t in tokens.iter().flatten() {
        if t.dst < 0 || t.dst as usize >= n {
            return Err(Error::input(format!("token {} has destination {} outside 0..{n}", t.tag, t.dst)));
        }
        per_dst[t.dst as usize] += 1;
        if per_dst[t.dst as usize] > cap {
            return Err(Error::input(format!("more than {cap} tokens destined for node {}", t.dst)));
        }
    }
    let holdings = tokens.into_iter().map(|resident| Holding { resident, arrived: Vec::new() }).collect();
    let send_all = |_: usize, hold: &mut Holding, _: &mut StepMeter| std::mem::take(&mut hold.resident);
    let (holdings, phase_log) = router.phase(holdings, key_len, &send_all)?;
    let mut log = RoundLog::new(router.width());
    log.append("route", phase_log);
    Ok((holdings.into_iter().map(|h| h.arrived).collect(), log))
}

/// Checks per-node counts and a common key length, which it returns.
pub(crate) fn check_tokens(tokens: &[Vec<Token>], cap: usize) -> Result<usize> {
    if cap == 0 {
        return Err(Error::param("token capacity must be at least 1"));
    }
    let mut key_len = None;
    for (u, list) in tokens.iter().enumerate() {
        if list.len() > cap {
            return Err(Error::input(format!("node {u} holds {} tokens, capacity is {cap}", list.len())));
        }
        for t in list {
            match key_len {
                None => key_len = Some(t.key.len()),
                Some(k) if k != t.key.len() => {
                    return Err(Error::input(format!("token {} has key length {}, expected {k}", t.tag, t.key.len())))
                }
                Some(_) => {}
            }
        }
    }
    Ok(key_len.unwrap_or(0))
}

/// Lexicographic `(key, tag)` order.
pub fn key_tag_order(meter: &mut StepMeter, a: &Token, b: &Token) -> Ordering {
    match meter.compare_words(&a.key, &b.key) {
        Ordering::Equal => meter.compare(&a.tag, &b.tag),
        ord => ord,
    }
}
