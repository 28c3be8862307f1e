use std::io::{BufRead, Write};

use super::{dense_ranks, ColorVector};
use crate::graph::{bfs_distances, AttributedGraph, Word};
use crate::{Error, Result};

/// Dense symmetric `n x n` distance table.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<f64>,
}

/// Distances are compared after rounding to this grid so that eigensolver
/// noise cannot split equal real distances.
const QUANTUM: f64 = 1e-9;

impl DistanceMatrix {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let entries = (0..n * n).map(|i| f(i / n, i % n)).collect();
        DistanceMatrix { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.entries[u * self.n + v]
    }

    /// Symmetric, zero diagonal, nonnegative within `tol`.
    pub fn check(&self, tol: f64) -> Result<()> {
        for u in 0..self.n {
            if self.get(u, u).abs() > tol {
                return Err(Error::input(format!("nonzero diagonal at {u}")));
            }
            for v in 0..self.n {
                let d = self.get(u, v);
                if d < -tol || !d.is_finite() {
                    return Err(Error::input(format!("bad distance at ({u}, {v}): {d}")));
                }
                if (d - self.get(v, u)).abs() > tol {
                    return Err(Error::input(format!("asymmetric at ({u}, {v})")));
                }
            }
        }
        Ok(())
    }

    fn quantized(&self, u: usize, v: usize) -> Word {
        (self.get(u, v) / QUANTUM).round() as Word
    }

    /// Dense CSV, one row per line.
    pub fn write_csv(&self, mut out: impl Write) -> Result<()> {
        for row in self.entries.chunks(self.n.max(1)).take(self.n) {
            let line: Vec<String> = row.iter().map(|d| d.to_string()).collect();
            writeln!(out, "{}", line.join(","))?;
        }
        Ok(())
    }

    pub fn read_csv(reader: impl BufRead) -> Result<Self> {
        let mut entries = Vec::new();
        let mut rows = 0;
        for line in reader.lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            for cell in line.split(',') {
                entries.push(
                    cell.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Format(format!("bad distance `{cell}`")))?,
                );
            }
            rows += 1;
        }
        if entries.len() != rows * rows {
            return Err(Error::Format("distance matrix is not square".into()));
        }
        Ok(DistanceMatrix { n: rows, entries })
    }
}

/// All-pairs hop distances.
pub fn spd_matrix(g: &AttributedGraph) -> Result<DistanceMatrix> {
    let n = g.n();
    let mut entries = Vec::with_capacity(n * n);
    for u in 0..n {
        for d in bfs_distances(g, u) {
            entries.push(d.ok_or(Error::Disconnected)? as f64);
        }
    }
    Ok(DistanceMatrix { n, entries })
}

/// One GD-WL step: rank of the sorted multiset `{(d(u, v), x_v) : v in V}`.
pub fn gdwl_step(g: &AttributedGraph, dist: &DistanceMatrix, x: &ColorVector) -> Result<ColorVector> {
    x.check(g.n())?;
    if dist.n() != g.n() {
        return Err(Error::input("distance matrix size differs from graph"));
    }
    let types: Vec<Vec<(Word, Word)>> = (0..g.n())
        .map(|u| {
            let mut pairs: Vec<(Word, Word)> = (0..g.n()).map(|v| (dist.quantized(u, v), x.0[v])).collect();
            pairs.sort_unstable();
            pairs
        })
        .collect();
    Ok(ColorVector(dense_ranks(&types)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_family, Family};
    use crate::wl::partition_of;

    #[test]
    fn spd_small_cases() {
        let p3 = spd_matrix(&gen_family(Family::Path, 3).unwrap()).unwrap();
        let rows: Vec<f64> = (0..9).map(|i| p3.get(i / 3, i % 3)).collect();
        assert_eq!(rows, vec![0.0, 1.0, 2.0, 1.0, 0.0, 1.0, 2.0, 1.0, 0.0]);
        let k5 = spd_matrix(&gen_family(Family::Complete, 5).unwrap()).unwrap();
        assert!((0..5).all(|u| (0..5).all(|v| k5.get(u, v) == if u == v { 0.0 } else { 1.0 })));
        let c4 = spd_matrix(&gen_family(Family::Cycle, 4).unwrap()).unwrap();
        assert_eq!(c4.get(0, 2), 2.0);
        c4.check(0.0).unwrap();
        let disconnected = AttributedGraph::new(3, [(0, 1)]).unwrap();
        assert!(matches!(spd_matrix(&disconnected), Err(Error::Disconnected)));
    }

    #[test]
    fn gdwl_cases() {
        let c7 = gen_family(Family::Cycle, 7).unwrap();
        let y = gdwl_step(&c7, &spd_matrix(&c7).unwrap(), &ColorVector::uniform(7)).unwrap();
        assert_eq!(y.class_count(), 1);

        let p3 = gen_family(Family::Path, 3).unwrap();
        let y = gdwl_step(&p3, &spd_matrix(&p3).unwrap(), &ColorVector::uniform(3)).unwrap();
        assert_eq!(partition_of(&y.0), vec![0, 1, 0]);

        let zero = DistanceMatrix::from_fn(3, |_, _| 0.0);
        let y = gdwl_step(&p3, &zero, &ColorVector(vec![5, 1, 2])).unwrap();
        assert_eq!(y.class_count(), 1);
    }

    #[test]
    fn csv_round_trip() {
        let d = spd_matrix(&gen_family(Family::Star, 4).unwrap()).unwrap();
        let mut buf = Vec::new();
        d.write_csv(&mut buf).unwrap();
        assert_eq!(DistanceMatrix::read_csv(&buf[..]).unwrap(), d);
    }
}
