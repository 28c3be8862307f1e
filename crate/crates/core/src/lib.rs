//! Resource-limited CONGEST toolkit.
//!
//! The crate bundles a round-synchronous message-passing simulator with
//! per-edge word bandwidth and metered per-node computation, the distributed
//! WL-refinement algorithms that run on it, sequential WL reference engines
//! used as oracles, resistance-distance locality tools, and the equality
//! gadget family used to exhibit round lower-bound trends.
//!
//! Module map:
//!
//! | module | contents |
//! |--------|----------|
//! | [`graph`] | [`AttributedGraph`], generators, metrics, preprocessing transforms, file formats |
//! | [`wl`] | sequential WL / k-WL / k-FWL / GD-WL engines and coloring verification |
//! | [`sim`] | [`sim::NodeProgram`] contract, the simulator, [`sim::RoundLog`], step budgets |
//! | [`algos`] | flood, upcast/downcast, distributed WL variants, expander routing/sorting/ranking |
//! | [`resistance`] | resistance matrices, local biconnectivity predicates, Tarjan and matrix-tree oracles |
//! | [`gadget`] | equality-instance gadget graphs and round scans |

pub mod algos;
pub mod error;
pub mod gadget;
pub mod graph;
pub mod resistance;
pub mod rng;
pub mod sim;
pub mod wl;

pub use error::{Error, Result};
pub use graph::{AttributedGraph, Word};
pub use wl::ColorVector;
