use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeCount {
    pub round: usize,
    pub from: usize,
    pub to: usize,
    pub words: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeSteps {
    pub round: usize,
    pub node: usize,
    pub steps: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseSummary {
    pub name: String,
    pub rounds: usize,
}

/// Accounting for one run (or a sequence of phases). Only nonzero edge and
/// step entries are stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundLog {
    pub width: usize,
    pub rounds: usize,
    /// Rounds in which at least one word was sent.
    pub transmission_rounds: usize,
    pub total_words: u64,
    pub peak_node_steps: u64,
    pub edge_words: Vec<EdgeCount>,
    pub node_steps: Vec<NodeSteps>,
    pub phases: Vec<PhaseSummary>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundSummary {
    pub rounds: usize,
    pub transmission_rounds: usize,
    pub total_words: u64,
    pub peak_node_steps: u64,
    pub width: usize,
    pub phases: Vec<PhaseSummary>,
}

impl RoundLog {
    pub fn new(width: usize) -> Self {
        RoundLog { width, ..Default::default() }
    }

    /// Appends `other` as a later phase, shifting its rounds.
    pub fn append(&mut self, name: &str, other: RoundLog) {
        let shift = self.rounds;
        self.edge_words
            .extend(other.edge_words.into_iter().map(|e| EdgeCount { round: e.round + shift, ..e }));
        self.node_steps
            .extend(other.node_steps.into_iter().map(|s| NodeSteps { round: s.round + shift, ..s }));
        self.rounds += other.rounds;
        self.transmission_rounds += other.transmission_rounds;
        self.total_words += other.total_words;
        self.peak_node_steps = self.peak_node_steps.max(other.peak_node_steps);
        self.width = self.width.max(other.width);
        if other.phases.is_empty() {
            self.phases.push(PhaseSummary { name: name.to_owned(), rounds: other.rounds });
        } else {
            self.phases.extend(other.phases);
        }
    }

    /// Largest single-round step count of `node`.
    pub fn peak_steps_of(&self, node: usize) -> u64 {
        self.node_steps.iter().filter(|s| s.node == node).map(|s| s.steps).max().unwrap_or(0)
    }

    /// Largest per-edge, per-round word count.
    pub fn max_edge_words(&self) -> usize {
        self.edge_words.iter().map(|e| e.words).max().unwrap_or(0)
    }

    pub fn summary(&self) -> RoundSummary {
        RoundSummary {
            rounds: self.rounds,
            transmission_rounds: self.transmission_rounds,
            total_words: self.total_words,
            peak_node_steps: self.peak_node_steps,
            width: self.width,
            phases: self.phases.clone(),
        }
    }

    /// `round,node,steps`
    pub fn write_steps_csv(&self, mut out: impl Write) -> Result<()> {
        writeln!(out, "round,node,steps")?;
        for s in &self.node_steps {
            writeln!(out, "{},{},{}", s.round, s.node, s.steps)?;
        }
        Ok(())
    }

    /// `round,edge_u,edge_v,direction,words` with `edge_u < edge_v`;
    /// direction is `fwd` for `edge_u -> edge_v`.
    pub fn write_edges_csv(&self, mut out: impl Write) -> Result<()> {
        writeln!(out, "round,edge_u,edge_v,direction,words")?;
        for e in &self.edge_words {
            let (u, v, dir) = if e.from < e.to { (e.from, e.to, "fwd") } else { (e.to, e.from, "rev") };
            writeln!(out, "{},{},{},{},{}", e.round, u, v, dir, e.words)?;
        }
        Ok(())
    }

    pub fn write_summary_json(&self, out: impl Write) -> Result<()> {
        serde_json::to_writer_pretty(out, &self.summary())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn append_shifts_rounds() {
        let mut a = RoundLog::new(2);
        a.rounds = 3;
        a.total_words = 4;
        let mut b = RoundLog::new(2);
        b.rounds = 2;
        b.edge_words.push(EdgeCount { round: 1, from: 0, to: 1, words: 2 });
        b.node_steps.push(NodeSteps { round: 2, node: 1, steps: 9 });
        b.peak_node_steps = 9;
        let mut total = RoundLog::new(2);
        total.append("a", a);
        total.append("b", b);
        assert_eq!(total.rounds, 5);
        assert_eq!(total.edge_words[0].round, 4);
        assert_eq!(total.peak_steps_of(1), 9);
        assert_eq!(total.phases.len(), 2);
        let mut csv = Vec::new();
        total.write_edges_csv(&mut csv).unwrap();
        assert!(String::from_utf8(csv).unwrap().contains("4,0,1,fwd,2"));
    }
}
