//! Distributed sorting and distinct-key ranking of tokens.
//!
//! Sorting runs a bitonic comparator network whose lanes are node IDs. A
//! comparator `(lo, hi)` is two routing phases: `lo` ships its block to
//! `hi`, which merges both blocks, keeps the larger part and returns the
//! smallest `L` tokens. Empty slots behave as `+inf`, so lanes past `n` and
//! short blocks need no padding tokens.

use std::cmp::Ordering;

use super::token::{check_tokens, key_tag_order, Holding, Router, Token, NO_RANK};
use crate::graph::Word;
use crate::sim::{RoundLog, StepMeter};
use crate::Result;

/// Rank field marking a token whose key already occurred with a smaller tag.
const DUPLICATE: Word = -2;

pub type TokenOrder = dyn Fn(&mut StepMeter, &Token, &Token) -> Ordering + Sync;

/// Comparator layers of the ascending bitonic network on `lanes` lanes;
/// comparators touching a lane `>= lanes` are dropped (they never swap).
pub fn bitonic_layers(lanes: usize) -> Vec<Vec<(usize, usize)>> {
    let size = lanes.next_power_of_two();
    let mut layers = Vec::new();
    let mut layer = |mask: usize| {
        layers.push((0..size).map(|i| (i, i ^ mask)).filter(|&(i, j)| j > i && j < lanes).collect::<Vec<_>>());
    };
    let mut block = 2;
    while block <= size {
        // flip step, then half-cleaners
        layer(block - 1);
        let mut stride = block / 4;
        while stride >= 1 {
            layer(stride);
            stride /= 2;
        }
        block *= 2;
    }
    layers.retain(|l| !l.is_empty());
    layers
}

/// Makes `resident` the sorted union of `resident` (already sorted) and
/// `arrived`.
fn normalize(hold: &mut Holding, order: &TokenOrder, meter: &mut StepMeter) {
    let mut incoming = std::mem::take(&mut hold.arrived);
    if incoming.is_empty() {
        return;
    }
    meter.sort_by(&mut incoming, |m, a, b| order(m, a, b));
    let resident = std::mem::take(&mut hold.resident);
    hold.resident = meter.merge_by(&resident, &incoming, |m, a, b| order(m, a, b));
}

type Prelude<'a> = dyn Fn(usize, &mut Holding, &mut StepMeter) + Sync + 'a;

struct Sorter<'r, 'g> {
    router: &'r Router<'g>,
    cap: usize,
    key_len: usize,
}

impl Sorter<'_, '_> {
    /// Runs the network. On return each node's block is split between a
    /// sorted `resident` and unsorted `arrived`; the next phase normalizes.
    /// `prelude` runs at every node before the first normalization.
    fn run(
        &self,
        mut holdings: Vec<Holding>,
        order: &TokenOrder,
        prelude: Option<&Prelude<'_>>,
        log: &mut RoundLog,
        comparators: &mut usize,
    ) -> Result<Vec<Holding>> {
        let n = self.router.n();
        let cap = self.cap;
        let mut first = true;
        for layer in bitonic_layers(n) {
            *comparators += layer.len();
            let mut partner = vec![None; n];
            for &(lo, hi) in &layer {
                partner[lo] = Some(hi);
                partner[hi] = Some(lo);
            }
            let with_prelude = first.then_some(prelude).flatten();
            first = false;
            let ship_up = |u: usize, hold: &mut Holding, meter: &mut StepMeter| {
                if let Some(pre) = with_prelude {
                    pre(u, hold, meter);
                }
                normalize(hold, order, meter);
                match partner[u] {
                    Some(hi) if hi > u => {
                        let mut block = std::mem::take(&mut hold.resident);
                        for t in &mut block {
                            t.dst = hi as Word;
                        }
                        block
                    }
                    _ => Vec::new(),
                }
            };
            let (next, phase_log) = self.router.phase(holdings, self.key_len, &ship_up)?;
            log.append("sort", phase_log);
            let split_back = |u: usize, hold: &mut Holding, meter: &mut StepMeter| {
                normalize(hold, order, meter);
                match partner[u] {
                    Some(lo) if lo < u => {
                        let keep = hold.resident.split_off(hold.resident.len().min(cap));
                        let mut low = std::mem::replace(&mut hold.resident, keep);
                        for t in &mut low {
                            t.dst = lo as Word;
                        }
                        low
                    }
                    _ => Vec::new(),
                }
            };
            let (next, phase_log) = self.router.phase(next, self.key_len, &split_back)?;
            log.append("sort", phase_log);
            holdings = next;
        }
        if first {
            // single lane: no comparator ran the prelude
            if let Some(pre) = prelude {
                let local = |u: usize, hold: &mut Holding, meter: &mut StepMeter| {
                    pre(u, hold, meter);
                    Vec::new()
                };
                let (next, phase_log) = self.router.phase(holdings, self.key_len, &local)?;
                log.append("sort", phase_log);
                holdings = next;
            }
        }
        Ok(holdings)
    }

    fn local(&self, holdings: Vec<Holding>, name: &str, key_len: usize, action: &super::token::Action<'_>, log: &mut RoundLog) -> Result<Vec<Holding>> {
        let (next, phase_log) = self.router.phase(holdings, key_len, action)?;
        log.append(name, phase_log);
        Ok(next)
    }
}

#[derive(Debug, Clone)]
pub struct SortOutcome {
    /// Per node, sorted; node-ID order agrees with `order`.
    pub placement: Vec<Vec<Token>>,
    pub log: RoundLog,
    pub comparators: usize,
}

/// Sorts tokens (at most `cap` per node) so that every token at node `u`
/// precedes every token at node `v > u`, and each node's list is sorted.
pub fn expander_sort(router: &Router<'_>, tokens: Vec<Vec<Token>>, cap: usize, order: &TokenOrder) -> Result<SortOutcome> {
    if tokens.len() != router.n() {
        return Err(crate::Error::input(format!("expected token lists for {} nodes, got {}", router.n(), tokens.len())));
    }
    let key_len = check_tokens(&tokens, cap)?;
    let sorter = Sorter { router, cap, key_len };
    let mut log = RoundLog::new(router.width());
    let mut comparators = 0;
    let holdings = tokens.into_iter().map(|arrived| Holding { resident: Vec::new(), arrived }).collect();
    let holdings = sorter.run(holdings, order, None, &mut log, &mut comparators)?;
    let finish = |_: usize, hold: &mut Holding, meter: &mut StepMeter| {
        normalize(hold, order, meter);
        Vec::new()
    };
    let holdings = sorter.local(holdings, "sort", key_len, &finish, &mut log)?;
    Ok(SortOutcome { placement: holdings.into_iter().map(|h| h.resident).collect(), log, comparators })
}

#[derive(Debug, Clone)]
pub struct RankOutcome {
    /// `ranks[u][i]`: number of distinct keys smaller than `keys[u][i]`.
    pub ranks: Vec<Vec<Word>>,
    /// Final token placement, sorted by `(key, tag)` with ranks filled in.
    pub placement: Vec<Vec<Token>>,
    pub log: RoundLog,
}

fn dup_last_order(meter: &mut StepMeter, a: &Token, b: &Token) -> Ordering {
    match meter.compare(&(a.rank == DUPLICATE), &(b.rank == DUPLICATE)) {
        Ordering::Equal => key_tag_order(meter, a, b),
        ord => ord,
    }
}

/// Ranks the keys held by the nodes (at most `cap` per node, common
/// length). Token `i` of node `u` gets tag `u * cap + i`.
pub fn token_rank(router: &Router<'_>, keys: &[Vec<Vec<Word>>], cap: usize) -> Result<RankOutcome> {
    let n = router.n();
    if keys.len() != n {
        return Err(crate::Error::input(format!("expected key lists for {n} nodes, got {}", keys.len())));
    }
    let tokens: Vec<Vec<Token>> = keys
        .iter()
        .enumerate()
        .map(|(u, list)| {
            list.iter()
                .enumerate()
                .map(|(i, key)| Token::new(key.clone(), (u * cap + i) as Word, u as Word, u as Word))
                .collect()
        })
        .collect();
    let key_len = check_tokens(&tokens, cap)?;
    let sorter = Sorter { router, cap, key_len };
    let mut log = RoundLog::new(router.width());
    let mut comparators = 0;
    let by_key: &TokenOrder = &key_tag_order;
    let dups_last: &TokenOrder = &dup_last_order;
    let slot_base = |u: usize| (u * cap) as Word;

    // 1. sort by (key, tag)
    let holdings = tokens.into_iter().map(|arrived| Holding { resident: Vec::new(), arrived }).collect();
    let holdings = sorter.run(holdings, by_key, None, &mut log, &mut comparators)?;

    // 2. each node hands a copy of its largest token to its successor
    let boundary = |u: usize, hold: &mut Holding, meter: &mut StepMeter| {
        normalize(hold, by_key, meter);
        match hold.resident.last() {
            Some(last) if u + 1 < n => {
                vec![Token { key: last.key.clone(), tag: last.tag, src: u as Word, rank: NO_RANK, dst: u as Word + 1 }]
            }
            _ => Vec::new(),
        }
    };
    let holdings = sorter.local(holdings, "dedup", key_len, &boundary, &mut log)?;

    // 3. mark repeats, then sort with duplicates last
    let mark = |_: usize, hold: &mut Holding, meter: &mut StepMeter| {
        let previous = hold.arrived.pop().map(|t| t.key);
        debug_assert!(hold.arrived.is_empty());
        let mut prev = previous;
        for t in &mut hold.resident {
            if prev.as_ref().is_some_and(|p| meter.compare_words(p, &t.key).is_eq()) {
                t.rank = DUPLICATE;
            }
            prev = Some(t.key.clone());
        }
        hold.arrived = std::mem::take(&mut hold.resident);
    };
    let holdings = sorter.run(holdings, dups_last, Some(&mark), &mut log, &mut comparators)?;

    // 4. representatives take their position as rank; back to (key, tag)
    let assign = |u: usize, hold: &mut Holding, meter: &mut StepMeter| {
        normalize(hold, dups_last, meter);
        for (i, t) in hold.resident.iter_mut().enumerate() {
            if t.rank != DUPLICATE {
                t.rank = slot_base(u) + i as Word;
            }
        }
        hold.arrived = std::mem::take(&mut hold.resident);
    };
    let holdings = sorter.run(holdings, by_key, Some(&assign), &mut log, &mut comparators)?;

    // 5. copy ranks forward onto duplicates: after the step with shift s,
    // every slot knows the nearest rank within the last 2s slots
    let apply = |u: usize, hold: &mut Holding| {
        for msg in std::mem::take(&mut hold.arrived) {
            let slot = (msg.tag - slot_base(u)) as usize;
            if let Some(t) = hold.resident.get_mut(slot) {
                if t.rank == DUPLICATE {
                    t.rank = msg.rank;
                }
            }
        }
    };
    let mut holdings = holdings;
    let total_slots = n * cap;
    let mut shift = 1;
    let mut first = true;
    while shift < total_slots {
        let is_first = first;
        let step = |u: usize, hold: &mut Holding, meter: &mut StepMeter| {
            if is_first {
                normalize(hold, by_key, meter);
            } else {
                apply(u, hold);
            }
            let mut out = Vec::new();
            for (i, t) in hold.resident.iter().enumerate() {
                let target = u * cap + i + shift;
                if t.rank != DUPLICATE && target < total_slots {
                    out.push(Token { key: Vec::new(), tag: target as Word, src: u as Word, rank: t.rank, dst: (target / cap) as Word });
                }
            }
            out
        };
        holdings = sorter.local(holdings, "scan", 0, &step, &mut log)?;
        first = false;
        shift *= 2;
    }

    // 6. ranks travel home
    let home = |u: usize, hold: &mut Holding, meter: &mut StepMeter| {
        if first {
            normalize(hold, by_key, meter);
        } else {
            apply(u, hold);
        }
        hold.resident
            .iter()
            .map(|t| Token { key: Vec::new(), tag: t.tag, src: u as Word, rank: t.rank, dst: t.src })
            .collect()
    };
    let holdings = sorter.local(holdings, "return", 0, &home, &mut log)?;

    let mut ranks: Vec<Vec<Word>> = keys.iter().map(|list| vec![NO_RANK; list.len()]).collect();
    let mut placement = Vec::with_capacity(n);
    for (u, hold) in holdings.into_iter().enumerate() {
        for msg in &hold.arrived {
            ranks[u][(msg.tag - slot_base(u)) as usize] = msg.rank;
        }
        placement.push(hold.resident);
    }
    debug_assert!(ranks.iter().flatten().all(|&r| r >= 0));
    Ok(RankOutcome { ranks, placement, log })
}
