//! Distributed algorithms as node programs.

pub mod bounds;
mod cast;
mod gather;
mod ports;
mod sort;
mod token;
mod tree;
mod vedges;
mod vnode;
mod wl_tree;

pub use cast::{downcast, upcast, Addressed};
pub use sort::{bitonic_layers, expander_sort, token_rank, RankOutcome, SortOutcome, TokenOrder};
pub use token::{expander_route, key_tag_order, token_width, Backend, Holding, Router, Token, NO_RANK};
pub use tree::{flood_bfs, SpanningTree};
pub use vedges::{type_key_len, vedges_budget, wl_virtual_edges, wl_virtual_edges_with};
pub use vnode::wl_virtual_node;
pub use wl_tree::{global_compute, wl_congest, wl_congest_config, wl_congest_with};
