use std::collections::BTreeMap;

use super::StepMeter;
use crate::graph::Word;

/// What a node knows locally: its identity, ports, features and the global
/// parameters every node is given (`n`, width).
#[derive(Debug, Clone)]
pub struct NodeContext<'g> {
    /// Simulator handle; equals the port number neighbors use for this node.
    pub index: usize,
    /// Unique ID (graph label when present, otherwise `index`).
    pub id: Word,
    pub n: usize,
    pub width: usize,
    /// Sorted neighbor handles.
    pub neighbors: &'g [usize],
    /// `overlay[i]` marks `neighbors[i]` as reached over an overlay edge.
    pub overlay: Vec<bool>,
    pub neighbor_ids: Vec<Word>,
    pub features: &'g [Word],
}

impl NodeContext<'_> {
    pub fn degree(&self) -> usize {
        self.neighbors.len()
    }

    /// Neighbors over non-overlay edges.
    pub fn original_neighbors(&self) -> impl Iterator<Item = usize> + '_ {
        self.neighbors
            .iter()
            .zip(&self.overlay)
            .filter(|(_, &o)| !o)
            .map(|(&v, _)| v)
    }

    pub fn original_degree(&self) -> usize {
        self.overlay.iter().filter(|&&o| !o).count()
    }

    pub fn is_overlay(&self, v: usize) -> bool {
        self.neighbors.binary_search(&v).map_or(false, |i| self.overlay[i])
    }

    pub fn neighbor_id(&self, v: usize) -> Word {
        let i = self.neighbors.binary_search(&v).expect("not a neighbor");
        self.neighbor_ids[i]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// Has pending work; keeps the run alive.
    Active,
    /// Waiting for input; the run may end if everyone is idle and silent.
    Idle,
    /// Done; never invoked again.
    Halt,
}

/// Words received this round, keyed by sender and ordered by sender handle.
#[derive(Debug, Clone, Default)]
pub struct Inbox {
    entries: Vec<(usize, Vec<Word>)>,
}

impl Inbox {
    pub(crate) fn push(&mut self, from: usize, words: Vec<Word>) {
        debug_assert!(self.entries.last().map_or(true, |(f, _)| *f < from));
        self.entries.push((from, words));
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &[Word])> {
        self.entries.iter().map(|(f, w)| (*f, w.as_slice()))
    }

    pub fn from(&self, sender: usize) -> &[Word] {
        self.entries
            .binary_search_by_key(&sender, |(f, _)| *f)
            .map_or(&[], |i| &self.entries[i].1)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn word_count(&self) -> usize {
        self.entries.iter().map(|(_, w)| w.len()).sum()
    }
}

/// Words a node emits this round, per destination.
#[derive(Debug, Clone, Default)]
pub struct Outbox {
    entries: BTreeMap<usize, Vec<Word>>,
}

impl Outbox {
    pub fn send(&mut self, to: usize, words: &[Word]) {
        if !words.is_empty() {
            self.entries.entry(to).or_default().extend_from_slice(words);
        }
    }

    pub fn push(&mut self, to: usize, word: Word) {
        self.entries.entry(to).or_default().push(word);
    }

    pub fn word_count(&self) -> usize {
        self.entries.values().map(Vec::len).sum()
    }

    pub(crate) fn into_entries(self) -> impl Iterator<Item = (usize, Vec<Word>)> {
        self.entries.into_iter()
    }
}

/// Per-round handle passed to [`NodeProgram::on_round`].
pub struct Round<'a> {
    pub number: usize,
    pub inbox: &'a Inbox,
    pub outbox: &'a mut Outbox,
    pub meter: &'a mut StepMeter,
}

impl Round<'_> {
    pub fn send(&mut self, to: usize, words: &[Word]) {
        self.outbox.send(to, words);
    }

    pub fn push(&mut self, to: usize, word: Word) {
        self.outbox.push(to, word);
    }
}

/// A distributed algorithm as per-node state plus a round transition.
pub trait NodeProgram: Sync {
    type State: Send;

    fn init(&self, ctx: &NodeContext<'_>) -> Self::State;

    fn on_round(&self, ctx: &NodeContext<'_>, state: &mut Self::State, round: &mut Round<'_>) -> Status;
}
