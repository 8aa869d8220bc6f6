//! Spectral theory of graph Laplacians on N-ary trees, the looped tree and
//! periodic lattices, with every closed form paired against an independent
//! finite computation.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cyclic;
pub mod error;
pub mod graph;
pub mod jacobi;
pub mod lattice;
pub mod measures;
pub mod operators;
pub mod periodic;
pub mod quadrature;
pub mod resistance;
pub mod verify;
pub mod walks;

pub use error::{Result, SpectralError};
pub use graph::{LatticeTorus, TruncatedTree, Word};
pub use jacobi::{DiscreteMeasure, JacobiMatrix};
pub use operators::VertexVector;
pub use verify::{run_suite, Check, Suite, VerifyOptions};
