//! Permutations, search trees grown from them, and Hoare's FIND.

mod bst;
mod decomposition;
mod find;
mod permutation;

pub use bst::{build_bst, depth_plot, node_depth, Bst, Node};
pub use decomposition::{record_decomposition, RecordDecomposition};
pub use find::{find_select, FindTrace};
pub use permutation::Permutation;
