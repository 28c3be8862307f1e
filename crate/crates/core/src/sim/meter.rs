use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::graph::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpKind {
    Compare,
    WordOp,
    Read,
    Write,
}

/// Step counter for one node in one round. Every comparison, word
/// operation, word read and word write costs one step.
#[derive(Debug, Clone, Default)]
pub struct StepMeter {
    steps: u64,
}

impl StepMeter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn charge(&mut self, kind: OpKind) {
        self.charge_n(kind, 1);
    }

    pub fn charge_n(&mut self, _kind: OpKind, count: usize) {
        self.steps += count as u64;
    }

    pub fn compare<T: Ord + ?Sized>(&mut self, a: &T, b: &T) -> Ordering {
        self.steps += 1;
        a.cmp(b)
    }

    /// Lexicographic comparison charging one step per word pair examined.
    pub fn compare_words(&mut self, a: &[Word], b: &[Word]) -> Ordering {
        let mismatch = a.iter().zip(b).position(|(x, y)| x != y);
        let examined = mismatch.map_or(a.len().min(b.len()).max(1), |i| i + 1);
        self.steps += examined as u64;
        a.cmp(b)
    }

    /// Stable merge sort charging one step per comparison
    /// (at most `k ceil(log2 k)` for `k` items).
    pub fn sort<T: Ord + Clone>(&mut self, items: &mut [T]) {
        self.sort_by(items, |m, a, b| m.compare(a, b));
    }

    /// Stable merge sort where `cmp` does its own charging.
    pub fn sort_by<T: Clone>(&mut self, items: &mut [T], mut cmp: impl FnMut(&mut Self, &T, &T) -> Ordering) {
        self.merge_sort(items, &mut cmp);
    }

    fn merge_sort<T: Clone>(&mut self, items: &mut [T], cmp: &mut dyn FnMut(&mut Self, &T, &T) -> Ordering) {
        if items.len() < 2 {
            return;
        }
        let mid = items.len() / 2;
        self.merge_sort(&mut items[..mid], cmp);
        self.merge_sort(&mut items[mid..], cmp);
        let merged = self.merge_dyn(&items[..mid], &items[mid..], cmp);
        items.clone_from_slice(&merged);
    }

    /// Stable merge of two sorted runs (at most `a + b - 1` comparisons).
    pub fn merge_by<T: Clone>(
        &mut self,
        a: &[T],
        b: &[T],
        mut cmp: impl FnMut(&mut Self, &T, &T) -> Ordering,
    ) -> Vec<T> {
        self.merge_dyn(a, b, &mut cmp)
    }

    fn merge_dyn<T: Clone>(&mut self, a: &[T], b: &[T], cmp: &mut dyn FnMut(&mut Self, &T, &T) -> Ordering) -> Vec<T> {
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            if cmp(self, &b[j], &a[i]) == Ordering::Less {
                out.push(b[j].clone());
                j += 1;
            } else {
                out.push(a[i].clone());
                i += 1;
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BudgetClass {
    Unlimited,
    /// `n ceil(log2 n)`
    NLogN,
    /// `n Δ ceil(log2 n)`
    NDeltaLogN,
    /// `Δ ceil(log2 n)^2`
    DeltaLogSquared,
}

/// Per-node, per-round step cap `kappa * class(n, Δ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepBudget {
    pub class: BudgetClass,
    pub kappa: u64,
}

pub const DEFAULT_KAPPA: u64 = 8;

impl StepBudget {
    pub const UNLIMITED: StepBudget = StepBudget { class: BudgetClass::Unlimited, kappa: 1 };

    pub fn new(class: BudgetClass) -> Self {
        StepBudget { class, kappa: DEFAULT_KAPPA }
    }

    pub fn with_kappa(self, kappa: u64) -> Self {
        StepBudget { kappa, ..self }
    }

    pub fn class_name(&self) -> &'static str {
        match self.class {
            BudgetClass::Unlimited => "unlimited",
            BudgetClass::NLogN => "TIME(n log n)",
            BudgetClass::NDeltaLogN => "TIME(nΔ log n)",
            BudgetClass::DeltaLogSquared => "TIME(Δ log² n)",
        }
    }

    /// Cap for a graph with `n` nodes and max degree `delta`; `None` if unbounded.
    /// Degenerate factors are clamped to 1 so the cap is monotone and positive.
    pub fn bound(&self, n: usize, delta: usize) -> Option<u64> {
        let n = n.max(1) as u64;
        let delta = delta.max(1) as u64;
        let log = ceil_log2(n).max(1);
        let base = match self.class {
            BudgetClass::Unlimited => return None,
            BudgetClass::NLogN => n * log,
            BudgetClass::NDeltaLogN => n * delta * log,
            BudgetClass::DeltaLogSquared => delta * log * log,
        };
        Some(self.kappa * base)
    }
}

pub(crate) fn ceil_log2(x: u64) -> u64 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros() as u64
    }
}

impl std::str::FromStr for BudgetClass {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "unlimited" => Ok(BudgetClass::Unlimited),
            "nlogn" => Ok(BudgetClass::NLogN),
            "ndeltalogn" => Ok(BudgetClass::NDeltaLogN),
            "deltalog2n" => Ok(BudgetClass::DeltaLogSquared),
            other => Err(crate::Error::param(format!("unknown budget class `{other}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ceil_log2_values() {
        let got: Vec<u64> = [1, 2, 3, 4, 5, 8, 9].iter().map(|&x| ceil_log2(x)).collect();
        assert_eq!(got, vec![0, 1, 2, 2, 3, 3, 4]);
    }

    #[test]
    fn zero_work_is_free() {
        assert_eq!(StepMeter::new().steps(), 0);
    }

    #[test]
    fn word_comparison_cost() {
        let mut m = StepMeter::new();
        m.compare_words(&[1, 2, 3], &[1, 2, 4]);
        assert_eq!(m.steps(), 3);
        m.compare_words(&[9], &[1, 2]);
        assert_eq!(m.steps(), 4);
    }

    #[test]
    fn budget_bounds_are_monotone() {
        for class in [BudgetClass::NLogN, BudgetClass::NDeltaLogN, BudgetClass::DeltaLogSquared] {
            let b = StepBudget::new(class);
            for n in 1..40 {
                for d in 0..10 {
                    let here = b.bound(n, d).unwrap();
                    assert!(here <= b.bound(n + 1, d).unwrap());
                    assert!(here <= b.bound(n, d + 1).unwrap());
                }
            }
        }
        assert_eq!(StepBudget::new(BudgetClass::NDeltaLogN).bound(16, 3), Some(8 * 16 * 3 * 4));
    }

    proptest! {
        #[test]
        fn sort_compare_count_within_bounds(v in proptest::collection::vec(-50i64..50, 0..200)) {
            let mut m = StepMeter::new();
            let mut sorted = v.clone();
            m.sort(&mut sorted);
            let mut expected = v.clone();
            expected.sort();
            prop_assert_eq!(&sorted, &expected);
            let k = v.len() as u64;
            if k >= 2 {
                prop_assert!(m.steps() >= k - 1);
                prop_assert!(m.steps() <= k * ceil_log2(k));
            }
        }

        #[test]
        fn merge_compare_count(mut a in proptest::collection::vec(0i64..20, 1..50),
                               mut b in proptest::collection::vec(0i64..20, 1..50)) {
            a.sort();
            b.sort();
            let mut m = StepMeter::new();
            let merged = m.merge_by(&a, &b, |m, x, y| m.compare(x, y));
            prop_assert!(merged.windows(2).all(|w| w[0] <= w[1]));
            prop_assert!(m.steps() <= (a.len() + b.len() - 1) as u64);
        }
    }
}
