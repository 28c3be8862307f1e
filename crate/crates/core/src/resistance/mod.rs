//! Effective resistance and the biconnectivity predicates it decides.
//!
//! An edge is a bridge iff its resistance is exactly 1; a node is a cut
//! vertex iff some pair of its neighbors has `u` on every path, which shows
//! up as additivity `R(s,t) = R(s,u) + R(u,t)`. Both predicates only look at
//! resistances among a node's closed neighborhood. [`cut_sets_tarjan`] and
//! [`spanning_tree_edge_fraction`] are independent oracles.

mod experiment;
mod matrix;
mod predicates;
mod spanning;
mod tarjan;
mod witness;

pub use experiment::{experiment_locality, GraphOutcome, LocalityConfig, LocalityReport};
pub use matrix::{laplacian, resistance_matrix, ResistanceMatrix, EIGEN_CUTOFF};
pub use predicates::{cut_edge_local, cut_vertex_local, PREDICATE_TOL};
pub use spanning::{log_spanning_tree_count, spanning_tree_edge_fraction, ORACLE_MAX_NODES};
pub use tarjan::{cut_sets_tarjan, CutSets};
pub use witness::{edge_ball, globality_witness, rooted_isomorphic, Witness};
