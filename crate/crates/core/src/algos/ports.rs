//! Per-edge word queues shared by the stream-based node programs.

use std::collections::VecDeque;

use crate::graph::Word;
use crate::sim::{Inbox, NodeContext, Round};

/// Outgoing and incoming word queues, one per port (index into the node's
/// sorted neighbor list).
#[derive(Debug, Clone, Default)]
pub(crate) struct Ports {
    pub out: Vec<VecDeque<Word>>,
    pub inc: Vec<VecDeque<Word>>,
}

impl Ports {
    pub fn new(degree: usize) -> Self {
        Ports { out: vec![VecDeque::new(); degree], inc: vec![VecDeque::new(); degree] }
    }

    pub fn port(ctx: &NodeContext<'_>, v: usize) -> usize {
        ctx.neighbors.binary_search(&v).expect("sender is a neighbor")
    }

    pub fn absorb(&mut self, ctx: &NodeContext<'_>, inbox: &Inbox) {
        for (from, words) in inbox.iter() {
            self.inc[Self::port(ctx, from)].extend(words.iter().copied());
        }
    }

    pub fn enqueue(&mut self, port: usize, words: impl IntoIterator<Item = Word>) {
        self.out[port].extend(words);
    }

    pub fn enqueue_all(&mut self, word: Word) {
        for q in &mut self.out {
            q.push_back(word);
        }
    }

    /// Sends up to `w` queued words on every port.
    pub fn flush(&mut self, ctx: &NodeContext<'_>, round: &mut Round<'_>) {
        for (port, q) in self.out.iter_mut().enumerate() {
            let k = q.len().min(ctx.width);
            if k > 0 {
                let words: Vec<Word> = q.drain(..k).collect();
                round.send(ctx.neighbors[port], &words);
            }
        }
    }

    pub fn out_empty(&self) -> bool {
        self.out.iter().all(VecDeque::is_empty)
    }
}
