use crate::graph::AttributedGraph;
use crate::{Error, Result};

/// Largest graph the matrix-tree oracle accepts.
pub const ORACLE_MAX_NODES: usize = 64;

/// `ln |det(a)|` by Gaussian elimination with partial pivoting; `None` for a
/// singular matrix. `a` is `k x k`, row-major.
fn log_abs_det(mut a: Vec<f64>, k: usize) -> Option<f64> {
    let mut log = 0.0;
    for col in 0..k {
        let pivot = (col..k).max_by(|&i, &j| a[i * k + col].abs().total_cmp(&a[j * k + col].abs()))?;
        let p = a[pivot * k + col];
        if p.abs() < 1e-12 {
            return None;
        }
        if pivot != col {
            for c in 0..k {
                a.swap(pivot * k + c, col * k + c);
            }
        }
        log += p.abs().ln();
        for row in col + 1..k {
            let factor = a[row * k + col] / p;
            if factor != 0.0 {
                for c in col..k {
                    a[row * k + c] -= factor * a[col * k + c];
                }
            }
        }
    }
    Some(log)
}

/// Laplacian (multigraph-aware) with node `v` merged into `u` when
/// `contract = Some((u, v))`, then reduced by deleting the last row/column.
fn reduced_laplacian(g: &AttributedGraph, contract: Option<(usize, usize)>) -> (Vec<f64>, usize) {
    let n = g.n();
    // map v onto u and close the gap
    let index = |x: usize| -> usize {
        match contract {
            Some((u, v)) => {
                let x = if x == v { u } else { x };
                if x > v {
                    x - 1
                } else {
                    x
                }
            }
            None => x,
        }
    };
    let size = if contract.is_some() { n - 1 } else { n };
    let mut l = vec![0.0; size * size];
    for &(a, b) in g.edges() {
        let (a, b) = (index(a), index(b));
        if a == b {
            continue;
        }
        l[a * size + a] += 1.0;
        l[b * size + b] += 1.0;
        l[a * size + b] -= 1.0;
        l[b * size + a] -= 1.0;
    }
    let k = size - 1;
    let reduced = (0..k).flat_map(|r| l[r * size..r * size + k].to_vec()).collect();
    (reduced, k)
}

/// `ln tau(G)` by the matrix-tree theorem; `None` if `g` is disconnected.
pub fn log_spanning_tree_count(g: &AttributedGraph) -> Option<f64> {
    let (l, k) = reduced_laplacian(g, None);
    log_abs_det(l, k)
}

/// Fraction of spanning trees containing `edge`: `tau(G / e) / tau(G)`.
pub fn spanning_tree_edge_fraction(g: &AttributedGraph, (u, v): (usize, usize)) -> Result<f64> {
    if g.n() > ORACLE_MAX_NODES {
        return Err(Error::param(format!("matrix-tree oracle limited to {ORACLE_MAX_NODES} nodes")));
    }
    if !g.has_edge(u, v) {
        return Err(Error::input(format!("({u}, {v}) is not an edge")));
    }
    let total = log_spanning_tree_count(g).ok_or(Error::Disconnected)?;
    let (l, k) = reduced_laplacian(g, Some((u.min(v), u.max(v))));
    let with_edge = if k == 0 { 0.0 } else { log_abs_det(l, k).ok_or(Error::Disconnected)? };
    Ok((with_edge - total).exp())
}
