//! Certified lower bounds and heuristic upper bounds for the minimum cutwidth
//! of a graph.
//!
//! The lower bound comes from a semidefinite relaxation over the lifted
//! linear-ordering matrix, strengthened by cutting planes found with a
//! simulated-annealing separator. The upper bound rounds the relaxation's
//! solution to a vertex ordering and improves it with a second annealing
//! pass over orderings.
//!
//! Conventions used throughout the crate:
//!
//! * vertices are `0..n` (text formats are 1-based and converted at the edge);
//! * the pair `(i, j)` with `i < j` has a 0-based rank `pair_index(i, j, n)`;
//! * the lifted matrix `X̄` has order `C(n, 2) + 1`; row/column 0 is the
//!   homogenising entry and pair `p` lives in row/column `p + 1`.

pub mod cuts;
pub mod error;
pub mod graph;
pub mod lower_bound;
pub mod ordering;
pub mod report;
pub mod rng;
pub mod sdp_model;
pub mod sdp_solver;
pub mod separation;
pub mod upper_bound;

pub use error::{Error, Result};
pub use graph::Graph;
pub use ordering::{LoVector, Permutation};
