//! Pipelined convergecast and broadcast over a rooted spanning tree.
//!
//! Both operations move fixed-width word records. Records are forwarded
//! whole (a hop waits for a record's last word), and nodes go idle when their
//! queues drain, so termination is detected by quiescence.

use std::collections::VecDeque;

use super::ports::Ports;
use super::tree::SpanningTree;
use crate::graph::{AttributedGraph, Word};
use crate::sim::{run, NodeContext, NodeProgram, Round, RoundLog, SimConfig, Status};
use crate::{Error, Result};

fn uniform_width<'a>(records: impl Iterator<Item = &'a Vec<Word>>) -> Result<Option<usize>> {
    let mut width = None;
    for r in records {
        match width {
            None => width = Some(r.len()),
            Some(w) if w != r.len() => return Err(Error::input("records differ in width")),
            _ => {}
        }
    }
    if width == Some(0) {
        return Err(Error::input("records must carry at least one word"));
    }
    Ok(width)
}

fn max_rounds(g: &AttributedGraph, words: usize) -> usize {
    4 * (g.n() + words) + 16
}

struct Upcast<'a> {
    tree: &'a SpanningTree,
    tokens: &'a [Vec<Vec<Word>>],
    width: usize,
    total: usize,
}

#[derive(Debug, Default)]
struct UpState {
    ports: Ports,
    queue: VecDeque<Word>,
    collected: Vec<Vec<Word>>,
}

impl NodeProgram for Upcast<'_> {
    type State = UpState;

    fn init(&self, ctx: &NodeContext<'_>) -> UpState {
        let own = &self.tokens[ctx.index];
        let mut st = UpState { ports: Ports::new(ctx.degree()), ..Default::default() };
        if ctx.index == self.tree.root {
            st.collected = own.clone();
        } else {
            st.queue = own.iter().flatten().copied().collect();
        }
        st
    }

    fn on_round(&self, ctx: &NodeContext<'_>, st: &mut UpState, round: &mut Round<'_>) -> Status {
        st.ports.absorb(ctx, round.inbox);
        for buf in &mut st.ports.inc {
            while buf.len() >= self.width {
                let record: Vec<Word> = buf.drain(..self.width).collect();
                if ctx.index == self.tree.root {
                    st.collected.push(record);
                } else {
                    st.queue.extend(record);
                }
            }
        }
        if ctx.index == self.tree.root {
            return if st.collected.len() == self.total { Status::Halt } else { Status::Idle };
        }
        let parent = self.tree.parent[ctx.index].expect("non-root has a parent");
        let k = st.queue.len().min(ctx.width);
        let words: Vec<Word> = st.queue.drain(..k).collect();
        round.send(parent, &words);
        if st.queue.is_empty() {
            Status::Idle
        } else {
            Status::Active
        }
    }
}

/// Collects every node's records at the root, in arrival order (root's own
/// first). With single-word records this takes at most
/// `depth + ceil(M / w) + 2` rounds.
pub fn upcast(
    g: &AttributedGraph,
    tree: &SpanningTree,
    tokens: &[Vec<Vec<Word>>],
    w: usize,
) -> Result<(Vec<Vec<Word>>, RoundLog)> {
    tree.validate(g)?;
    if tokens.len() != g.n() {
        return Err(Error::input("one token list per node required"));
    }
    let width = uniform_width(tokens.iter().flatten())?.unwrap_or(1);
    let total = tokens.iter().map(Vec::len).sum();
    let program = Upcast { tree, tokens, width, total };
    let cfg = SimConfig::new(w).with_max_rounds(max_rounds(g, total * width));
    let (mut states, log) = run(g, &program, cfg)?.completed()?;
    Ok((std::mem::take(&mut states[tree.root].collected), log))
}

/// A message addressed to node `dst`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Addressed {
    pub dst: usize,
    pub payload: Vec<Word>,
}

struct Downcast<'a> {
    tree: &'a SpanningTree,
    messages: &'a [Addressed],
    width: usize,
    children: Vec<Vec<usize>>,
}

#[derive(Debug, Default)]
struct DownState {
    ports: Ports,
    delivered: Vec<Vec<Word>>,
}

impl Downcast<'_> {
    fn accept(&self, ctx: &NodeContext<'_>, st: &mut DownState, record: Vec<Word>) {
        if record[0] == ctx.index as Word {
            st.delivered.push(record[1..].to_vec());
            return;
        }
        for &c in &self.children[ctx.index] {
            st.ports.enqueue(Ports::port(ctx, c), record.iter().copied());
        }
    }
}

impl NodeProgram for Downcast<'_> {
    type State = DownState;

    fn init(&self, ctx: &NodeContext<'_>) -> DownState {
        let mut st = DownState { ports: Ports::new(ctx.degree()), ..Default::default() };
        if ctx.index == self.tree.root {
            for m in self.messages {
                let record = std::iter::once(m.dst as Word).chain(m.payload.iter().copied()).collect();
                self.accept(ctx, &mut st, record);
            }
        }
        st
    }

    fn on_round(&self, ctx: &NodeContext<'_>, st: &mut DownState, round: &mut Round<'_>) -> Status {
        st.ports.absorb(ctx, round.inbox);
        if let Some(parent) = self.tree.parent[ctx.index] {
            let p = Ports::port(ctx, parent);
            while st.ports.inc[p].len() >= self.width {
                let record: Vec<Word> = st.ports.inc[p].drain(..self.width).collect();
                self.accept(ctx, st, record);
            }
        }
        st.ports.flush(ctx, round);
        match (ctx.index == self.tree.root, st.ports.out_empty()) {
            (true, true) => Status::Halt,
            (false, true) => Status::Idle,
            _ => Status::Active,
        }
    }
}

/// Broadcasts root-held messages down the tree; every node keeps those
/// addressed to it. Messages travel as `[dst, payload..]`, so with width
/// `T = 1 + payload` this takes at most `depth + ceil(M T / w) + 2` rounds.
pub fn downcast(
    g: &AttributedGraph,
    tree: &SpanningTree,
    messages: &[Addressed],
    w: usize,
) -> Result<(Vec<Vec<Vec<Word>>>, RoundLog)> {
    tree.validate(g)?;
    if let Some(m) = messages.iter().find(|m| m.dst >= g.n()) {
        return Err(Error::input(format!("message addressed to missing node {}", m.dst)));
    }
    let payload = uniform_width(messages.iter().map(|m| &m.payload).filter(|p| !p.is_empty()))?.unwrap_or(0);
    if messages.iter().any(|m| m.payload.len() != payload) {
        return Err(Error::input("payloads differ in width"));
    }
    let children = (0..g.n()).map(|u| tree.children(u)).collect();
    let program = Downcast { tree, messages, width: payload + 1, children };
    let cfg = SimConfig::new(w).with_max_rounds(max_rounds(g, messages.len() * (payload + 1)));
    let (states, log) = run(g, &program, cfg)?.completed()?;
    Ok((states.into_iter().map(|s| s.delivered).collect(), log))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_family, Family};

    fn tree(g: &AttributedGraph, root: usize) -> SpanningTree {
        SpanningTree::bfs(g, root).unwrap()
    }

    #[test]
    fn upcast_nothing() {
        let g = gen_family(Family::Path, 5).unwrap();
        let (got, log) = upcast(&g, &tree(&g, 0), &vec![Vec::new(); 5], 1).unwrap();
        assert!(got.is_empty());
        assert!(log.rounds <= 2);
    }

    #[test]
    fn upcast_star_leaves() {
        let k = 7;
        let g = gen_family(Family::Star, k + 1).unwrap();
        let tokens: Vec<Vec<Vec<Word>>> = (0..=k).map(|u| if u == 0 { vec![] } else { vec![vec![u as Word]] }).collect();
        let (mut got, log) = upcast(&g, &tree(&g, 0), &tokens, 1).unwrap();
        got.sort();
        assert_eq!(got, (1..=k as Word).map(|u| vec![u]).collect::<Vec<_>>());
        assert!(log.rounds <= 1 + k + 2);
    }

    #[test]
    fn upcast_path_six_tokens() {
        let g = gen_family(Family::Path, 4).unwrap();
        let tokens = vec![vec![vec![1]], vec![], vec![vec![2], vec![3]], vec![vec![4], vec![5], vec![6]]];
        let (got, log) = upcast(&g, &tree(&g, 0), &tokens, 2).unwrap();
        assert_eq!(got.len(), 6);
        assert!(log.rounds <= 3 + 3 + 2, "rounds {}", log.rounds);
    }

    #[test]
    fn downcast_to_root_sends_nothing() {
        let g = gen_family(Family::Path, 3).unwrap();
        let msgs = [Addressed { dst: 0, payload: vec![9] }];
        let (got, log) = downcast(&g, &tree(&g, 0), &msgs, 1).unwrap();
        assert_eq!(got[0], vec![vec![9]]);
        assert_eq!(log.transmission_rounds, 0);
    }

    #[test]
    fn downcast_star_one_each() {
        let n = 9;
        let g = gen_family(Family::Star, n).unwrap();
        let msgs: Vec<Addressed> = (1..n).map(|u| Addressed { dst: u, payload: vec![10 * u as Word] }).collect();
        let (got, log) = downcast(&g, &tree(&g, 0), &msgs, n - 1).unwrap();
        assert!((1..n).all(|u| got[u] == vec![vec![10 * u as Word]]));
        assert!(log.rounds <= 1 + 1 + 2);
    }

    #[test]
    fn downcast_path_six_messages() {
        let g = gen_family(Family::Path, 4).unwrap();
        let msgs: Vec<Addressed> = [1, 2, 3, 3, 2, 1].iter().map(|&d| Addressed { dst: d, payload: vec![d as Word] }).collect();
        let (got, log) = downcast(&g, &tree(&g, 0), &msgs, 2).unwrap();
        assert!((1..4).all(|u| got[u].len() == 2));
        // two-word records: depth + ceil(6 * 2 / 2) + 2
        assert!(log.rounds <= 3 + 6 + 2, "rounds {}", log.rounds);
    }
}
