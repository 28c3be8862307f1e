//! Sequential WL-family refinement engines.
//!
//! Every engine replaces the injective hash of a refinement step by the dense
//! 1-based rank of the step's type under lexicographic order, so outputs are
//! canonical and bounded by the number of colored objects.

mod gdwl;
mod higher;
mod reference;

pub use gdwl::{gdwl_step, spd_matrix, DistanceMatrix};
pub use higher::{
    kfwl_step, kwl_initial, kwl_initial_joint, kwl_step, refine_tuples_stable_joint, TupleColoring,
    TupleVariant,
};
pub use reference::{
    wl_distinguishes, wl_refine_stable, wl_step_reference, wl_types, verify_wl_coloring, WlType,
};

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::graph::Word;
use crate::{Error, Result};

/// One color per node.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ColorVector(pub Vec<Word>);

impl ColorVector {
    pub fn uniform(n: usize) -> Self {
        ColorVector(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Word] {
        &self.0
    }

    /// Length `n`, nonnegative entries.
    pub fn check(&self, n: usize) -> Result<()> {
        if self.0.len() != n {
            return Err(Error::input(format!("{} colors for {n} nodes", self.0.len())));
        }
        if let Some(c) = self.0.iter().find(|&&c| c < 0) {
            return Err(Error::input(format!("negative color {c}")));
        }
        Ok(())
    }

    /// Number of distinct colors.
    pub fn class_count(&self) -> usize {
        let mut v = self.0.clone();
        v.sort_unstable();
        v.dedup();
        v.len()
    }

    pub fn histogram(&self) -> BTreeMap<Word, usize> {
        histogram(&self.0)
    }

    /// One color per line.
    pub fn read(reader: impl BufRead) -> Result<Self> {
        let mut colors = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            colors.push(
                t.parse()
                    .map_err(|_| Error::Format(format!("line {}: bad color `{t}`", i + 1)))?,
            );
        }
        Ok(ColorVector(colors))
    }

    pub fn write(&self, mut out: impl Write) -> Result<()> {
        for c in &self.0 {
            writeln!(out, "{c}")?;
        }
        Ok(())
    }
}

impl From<Vec<Word>> for ColorVector {
    fn from(v: Vec<Word>) -> Self {
        ColorVector(v)
    }
}

pub(crate) fn histogram(colors: &[Word]) -> BTreeMap<Word, usize> {
    let mut h = BTreeMap::new();
    for &c in colors {
        *h.entry(c).or_insert(0) += 1;
    }
    h
}

/// Dense 1-based rank of each item among the distinct items.
pub fn dense_ranks<T: Ord>(items: &[T]) -> Vec<Word> {
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&a, &b| items[a].cmp(&items[b]));
    let mut ranks = vec![0; items.len()];
    let mut rank = 0;
    for (pos, &i) in order.iter().enumerate() {
        if pos == 0 || items[order[pos - 1]] != items[i] {
            rank += 1;
        }
        ranks[i] = rank;
    }
    ranks
}

/// Canonical class index per position, numbered by first occurrence.
pub fn partition_of(colors: &[Word]) -> Vec<usize> {
    let mut seen = BTreeMap::new();
    colors
        .iter()
        .map(|c| {
            let next = seen.len();
            *seen.entry(*c).or_insert(next)
        })
        .collect()
}

/// Whether `fine` refines `coarse` (equal fine colors imply equal coarse colors).
pub fn refines(fine: &[Word], coarse: &[Word]) -> bool {
    let mut map = BTreeMap::new();
    fine.iter()
        .zip(coarse)
        .all(|(f, c)| *map.entry(*f).or_insert(*c) == *c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_ranks_are_one_based_and_dense() {
        assert_eq!(dense_ranks(&[30, 10, 30, 20]), vec![3, 1, 3, 2]);
        assert_eq!(dense_ranks::<i64>(&[]), Vec::<i64>::new());
    }

    #[test]
    fn partition_ignores_values() {
        assert_eq!(partition_of(&[7, 3, 7]), partition_of(&[1, 2, 1]));
        assert_ne!(partition_of(&[7, 3, 3]), partition_of(&[1, 2, 1]));
    }

    #[test]
    fn color_file_round_trip() {
        let c = ColorVector(vec![3, 0, 12]);
        let mut buf = Vec::new();
        c.write(&mut buf).unwrap();
        assert_eq!(ColorVector::read(&buf[..]).unwrap(), c);
        assert!(ColorVector::read(&b"1\nx\n"[..]).is_err());
    }

    #[test]
    fn check_rejects_bad_vectors() {
        assert!(ColorVector(vec![0, -1]).check(2).is_err());
        assert!(ColorVector(vec![0]).check(2).is_err());
    }
}
