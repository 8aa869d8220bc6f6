//! Words, truncated N-ary trees and periodic lattices.

pub mod torus;
pub mod tree;
pub mod word;

pub use torus::LatticeTorus;
pub use tree::TruncatedTree;
pub use word::{children, common_prefix_len, parent, tree_path_length, Word};
