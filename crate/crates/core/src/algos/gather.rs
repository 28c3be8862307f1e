//! Tree gather-and-scatter by streaming sorted merge.
//!
//! Every port stream opens with two control words: a hello word (the
//! sender's color, or its ID) and a tree announcement (the sender's parent
//! ID, [`ROOT_ANNOUNCE`] at the root). The root's announcement floods a BFS
//! tree. Afterwards each node merges its own item with the sorted item
//! streams of its children and forwards the merged, duplicate-free stream to
//! its parent. Items are nonnegative words closed by [`TERM`]; a stream is
//! closed by [`END`]. Merging compares word by word, so a node can forward
//! a word as soon as every competing head has delivered the same position.
//!
//! Results flow back in emission order: a node that emitted items
//! `t_1 < t_2 < ...` receives one result per item from its parent and hands
//! each to the sources (itself or children) that contributed that item.
//! In rank mode the root knows an item's dense rank the moment the merge
//! emits it, so results stream down while the gather is still running.

use std::collections::VecDeque;

use super::ports::Ports;
use crate::graph::Word;
use crate::sim::{NodeContext, NodeProgram, OpKind, Round, StepMeter, Status};
use crate::{Error, Result};

pub(crate) const TERM: Word = -1;
pub(crate) const END: Word = -2;
pub(crate) const ROOT_ANNOUNCE: Word = -1;

pub(crate) type Finisher<'a> = dyn Fn(&[Vec<Word>]) -> Result<Vec<Vec<Word>>> + Sync + 'a;
pub(crate) type ItemBuilder<'a> = dyn Fn(&NodeContext<'_>, &[Word], &mut StepMeter) -> Vec<Word> + Sync + 'a;

pub(crate) enum Resolve<'a> {
    /// Result of an item is its 1-based rank among all distinct items.
    Rank,
    /// Once every item has arrived, the root maps the sorted item list to one
    /// payload per item. Payloads travel as `[len, words..]`.
    Deferred(&'a Finisher<'a>),
}

pub(crate) struct Gather<'a> {
    pub root: usize,
    pub hello: &'a (dyn Fn(&NodeContext<'_>) -> Word + Sync + 'a),
    /// Builds the node's item (ending in [`TERM`]) from the hello words
    /// received on each port.
    pub item: &'a ItemBuilder<'a>,
    pub resolve: Resolve<'a>,
}

#[derive(Debug, Default)]
struct Source {
    buf: VecDeque<Word>,
    ended: bool,
    /// Port for child sources, `None` for the node's own item.
    port: Option<usize>,
}

#[derive(Debug, Default)]
struct Cursor {
    candidates: Vec<usize>,
    words: Vec<Word>,
}

#[derive(Debug, Default)]
pub(crate) struct GatherState {
    ports: Ports,
    seen: Vec<usize>,
    hello: Vec<Option<Word>>,
    announce: Vec<Option<Word>>,
    child_source: Vec<Option<usize>>,
    parent: Option<usize>,
    joined: bool,
    sources: Vec<Source>,
    own_ready: bool,
    cursor: Option<Cursor>,
    merged: bool,
    emitted: Vec<Vec<usize>>,
    root_items: Vec<Vec<Word>>,
    resolved: usize,
    down: VecDeque<Word>,
    distributed: bool,
    pub output: Option<Vec<Word>>,
    pub error: Option<String>,
}

impl GatherState {
    fn all_announced(&self) -> bool {
        self.announce.iter().all(Option::is_some)
    }
}

impl Gather<'_> {
    fn is_root(&self, ctx: &NodeContext<'_>) -> bool {
        ctx.index == self.root
    }

    fn read_ports(&self, ctx: &NodeContext<'_>, st: &mut GatherState) {
        for p in 0..ctx.degree() {
            while let Some(word) = st.ports.inc[p].pop_front() {
                match st.seen[p] {
                    0 => st.hello[p] = Some(word),
                    1 => {
                        st.announce[p] = Some(word);
                        if word == ctx.id {
                            st.child_source[p] = Some(st.sources.len());
                            st.sources.push(Source { port: Some(p), ..Default::default() });
                        }
                    }
                    _ => match (st.child_source[p], st.parent == Some(p)) {
                        (Some(s), _) => st.sources[s].buf.push_back(word),
                        (None, true) => st.down.push_back(word),
                        (None, false) => {}
                    },
                }
                st.seen[p] += 1;
            }
        }
    }

    fn try_join(&self, ctx: &NodeContext<'_>, st: &mut GatherState, meter: &mut StepMeter) {
        if st.joined {
            return;
        }
        let heard = (0..ctx.degree()).filter(|&p| st.announce[p].is_some());
        if let Some(p) = heard.min_by_key(|&p| ctx.neighbor_ids[p]) {
            meter.charge_n(OpKind::Compare, ctx.degree());
            st.joined = true;
            st.parent = Some(p);
            st.ports.enqueue_all(ctx.neighbor_ids[p]);
        }
    }

    fn try_own_item(&self, ctx: &NodeContext<'_>, st: &mut GatherState, meter: &mut StepMeter) {
        if st.own_ready || st.hello.iter().any(Option::is_none) {
            return;
        }
        let hello: Vec<Word> = st.hello.iter().map(|h| h.expect("checked")).collect();
        let item = (self.item)(ctx, &hello, meter);
        debug_assert_eq!(item.last(), Some(&TERM));
        st.sources[0].buf.extend(item);
        st.sources[0].buf.push_back(END);
        st.own_ready = true;
    }

    /// Advances the merge until it stalls, finishes, or (below the root) the
    /// parent queue holds a full round of words.
    fn merge(&self, ctx: &NodeContext<'_>, st: &mut GatherState, meter: &mut StepMeter) -> Result<()> {
        if st.merged || !st.own_ready || !st.joined || !st.all_announced() {
            return Ok(());
        }
        let root = self.is_root(ctx);
        loop {
            if !root {
                let p = st.parent.expect("joined");
                if st.ports.out[p].len() >= ctx.width {
                    return Ok(());
                }
            }
            if st.cursor.is_none() {
                for s in &mut st.sources {
                    if s.ended {
                        continue;
                    }
                    match s.buf.front() {
                        None => return Ok(()),
                        Some(&END) => {
                            s.buf.pop_front();
                            s.ended = true;
                        }
                        Some(_) => {}
                    }
                }
                let alive: Vec<usize> = (0..st.sources.len()).filter(|&s| !st.sources[s].ended).collect();
                if alive.is_empty() {
                    st.merged = true;
                    if root {
                        self.finish_root(ctx, st)?;
                    } else {
                        st.ports.enqueue(st.parent.expect("joined"), [END]);
                    }
                    return Ok(());
                }
                st.cursor = Some(Cursor { candidates: alive, words: Vec::new() });
            }
            let cursor = st.cursor.as_mut().expect("set above");
            let j = cursor.words.len();
            if cursor.candidates.iter().any(|&s| st.sources[s].buf.len() <= j) {
                return Ok(());
            }
            meter.charge_n(OpKind::Compare, cursor.candidates.len());
            let next = cursor
                .candidates
                .iter()
                .map(|&s| st.sources[s].buf[j])
                .min()
                .expect("candidates nonempty");
            cursor.candidates.retain(|&s| st.sources[s].buf[j] == next);
            cursor.words.push(next);
            if !root {
                st.ports.enqueue(st.parent.expect("joined"), [next]);
            }
            if next == TERM {
                let done = st.cursor.take().expect("set above");
                for &s in &done.candidates {
                    st.sources[s].buf.drain(..done.words.len());
                }
                st.emitted.push(done.candidates);
                if root {
                    match self.resolve {
                        Resolve::Rank => {
                            let item = st.emitted.len() - 1;
                            self.distribute(st, item, vec![item as Word + 1]);
                        }
                        Resolve::Deferred(_) => st.root_items.push(done.words),
                    }
                }
            }
        }
    }

    fn finish_root(&self, _ctx: &NodeContext<'_>, st: &mut GatherState) -> Result<()> {
        if let Resolve::Deferred(f) = self.resolve {
            match f(&st.root_items) {
                Ok(payloads) if payloads.len() == st.root_items.len() => {
                    for (i, p) in payloads.into_iter().enumerate() {
                        self.distribute(st, i, p);
                    }
                }
                Ok(payloads) => {
                    st.error = Some(format!("{} results for {} items", payloads.len(), st.root_items.len()))
                }
                Err(e) => st.error = Some(e.to_string()),
            }
        }
        st.distributed = true;
        Ok(())
    }

    fn distribute(&self, st: &mut GatherState, item: usize, payload: Vec<Word>) {
        let contributors = std::mem::take(&mut st.emitted[item]);
        for &s in &contributors {
            match st.sources[s].port {
                None => st.output = Some(payload.clone()),
                Some(p) => match self.resolve {
                    Resolve::Rank => st.ports.enqueue(p, payload.iter().copied()),
                    Resolve::Deferred(_) => {
                        st.ports.enqueue(p, std::iter::once(payload.len() as Word).chain(payload.iter().copied()))
                    }
                },
            }
        }
        st.emitted[item] = contributors;
    }

    fn read_results(&self, st: &mut GatherState) {
        loop {
            if st.resolved >= st.emitted.len() {
                return;
            }
            let payload: Vec<Word> = match self.resolve {
                Resolve::Rank => match st.down.pop_front() {
                    Some(w) => vec![w],
                    None => return,
                },
                Resolve::Deferred(_) => {
                    let Some(&len) = st.down.front() else { return };
                    let len = len as usize;
                    if st.down.len() < len + 1 {
                        return;
                    }
                    st.down.pop_front();
                    st.down.drain(..len).collect()
                }
            };
            let item = st.resolved;
            self.distribute(st, item, payload);
            st.resolved += 1;
        }
    }
}

impl NodeProgram for Gather<'_> {
    type State = GatherState;

    fn init(&self, ctx: &NodeContext<'_>) -> GatherState {
        let d = ctx.degree();
        let mut st = GatherState {
            ports: Ports::new(d),
            seen: vec![0; d],
            hello: vec![None; d],
            announce: vec![None; d],
            child_source: vec![None; d],
            sources: vec![Source::default()],
            ..Default::default()
        };
        st.ports.enqueue_all((self.hello)(ctx));
        if self.is_root(ctx) {
            st.joined = true;
            st.ports.enqueue_all(ROOT_ANNOUNCE);
        }
        st
    }

    fn on_round(&self, ctx: &NodeContext<'_>, st: &mut GatherState, round: &mut Round<'_>) -> Status {
        st.ports.absorb(ctx, round.inbox);
        self.read_ports(ctx, st);
        self.try_join(ctx, st, round.meter);
        self.try_own_item(ctx, st, round.meter);
        if let Err(e) = self.merge(ctx, st, round.meter) {
            st.error = Some(e.to_string());
        }
        if !self.is_root(ctx) {
            self.read_results(st);
        }
        st.ports.flush(ctx, round);
        if st.error.is_some() && self.is_root(ctx) {
            return Status::Halt;
        }
        let finished = if self.is_root(ctx) {
            st.merged && st.distributed
        } else {
            st.merged && st.resolved == st.emitted.len()
        };
        match (finished && st.output.is_some(), st.ports.out_empty()) {
            (true, true) => Status::Halt,
            (_, false) => Status::Active,
            (false, true) => Status::Idle,
        }
    }
}

/// Node handle with the smallest unique ID; errors unless IDs are assigned,
/// nonnegative and distinct.
pub(crate) fn root_by_id(g: &crate::AttributedGraph) -> Result<usize> {
    let labels = g
        .labels()
        .ok_or_else(|| Error::param("unique node IDs required (assign them first)"))?;
    let mut sorted = labels.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) || sorted.first().is_some_and(|&l| l < 0) {
        return Err(Error::param("node IDs must be distinct and nonnegative"));
    }
    (0..g.n())
        .min_by_key(|&u| labels[u])
        .ok_or_else(|| Error::param("graph has no nodes"))
}
