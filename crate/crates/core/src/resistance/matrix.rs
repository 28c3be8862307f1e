use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::graph::{connected_components, AttributedGraph};
use crate::{Error, Result};

/// Eigenvalues at or below this are treated as the Laplacian's kernel.
pub const EIGEN_CUTOFF: f64 = 1e-9;

/// Combinatorial Laplacian `D - A` over all edges.
pub fn laplacian(g: &AttributedGraph) -> DMatrix<f64> {
    let mut l = DMatrix::zeros(g.n(), g.n());
    for &(u, v) in g.edges() {
        l[(u, u)] += 1.0;
        l[(v, v)] += 1.0;
        l[(u, v)] -= 1.0;
        l[(v, u)] -= 1.0;
    }
    l
}

/// Pairwise effective resistances of a connected graph with unit edges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResistanceMatrix {
    n: usize,
    /// Row-major.
    values: Vec<f64>,
}

impl ResistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, s: usize, t: usize) -> f64 {
        self.values[s * self.n + t]
    }

    /// Symmetry, zero diagonal, nonnegativity, the triangle inequality and
    /// `0 < R(u,v) <= 1` on edges, all up to `tol`.
    pub fn check(&self, g: &AttributedGraph, tol: f64) -> Result<()> {
        let n = self.n;
        let fail = |what: String| Err(Error::Format(format!("resistance matrix: {what}")));
        for s in 0..n {
            if self.get(s, s).abs() > tol {
                return fail(format!("R({s},{s}) = {}", self.get(s, s)));
            }
            for t in 0..n {
                let r = self.get(s, t);
                if r < -tol || (r - self.get(t, s)).abs() > tol {
                    return fail(format!("R({s},{t}) = {r} not symmetric and nonnegative"));
                }
                for u in 0..n {
                    if r > self.get(s, u) + self.get(u, t) + tol {
                        return fail(format!("triangle inequality fails for ({s},{u},{t})"));
                    }
                }
            }
        }
        for &(u, v) in g.edges() {
            let r = self.get(u, v);
            if r <= 0.0 || r > 1.0 + tol {
                return fail(format!("edge ({u},{v}) has R = {r}"));
            }
        }
        Ok(())
    }
}

/// `R(s,t) = (e_s - e_t)^T L^+ (e_s - e_t)`, with `L^+` assembled from the
/// eigenpairs of `L` whose eigenvalue exceeds [`EIGEN_CUTOFF`].
pub fn resistance_matrix(g: &AttributedGraph) -> Result<ResistanceMatrix> {
    let n = g.n();
    if connected_components(g).iter().any(|&c| c != 0) {
        return Err(Error::Disconnected);
    }
    let eigen = SymmetricEigen::new(laplacian(g));
    let mut pinv = DMatrix::<f64>::zeros(n, n);
    for (k, &lambda) in eigen.eigenvalues.iter().enumerate() {
        if lambda > EIGEN_CUTOFF {
            let v = eigen.eigenvectors.column(k);
            pinv += (v * v.transpose()) / lambda;
        }
    }
    let mut values = vec![0.0; n * n];
    for s in 0..n {
        for t in s + 1..n {
            let r = (pinv[(s, s)] + pinv[(t, t)] - 2.0 * pinv[(s, t)]).max(0.0);
            values[s * n + t] = r;
            values[t * n + s] = r;
        }
    }
    Ok(ResistanceMatrix { n, values })
}
