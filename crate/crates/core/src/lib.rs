//! Finding small vertex sets with small boundaries.
//!
//! Given a graph `G` and integers `k`, `t`, decide whether some non-empty
//! `X` with `|X| <= k` has at most `t` neighbours (or crossing edges).
//! The exact solvers are an important-separator search exponential only in
//! `t`, color coding exponential in `k + t`, and an exhaustive oracle used
//! as ground truth.

pub mod cli;
pub mod colorcoding;
pub mod flow;
pub mod format;
pub mod fpt;
pub mod graph;
pub mod instance;
pub mod oracle;
pub mod reductions;
pub mod selftest;

pub use graph::{EdgeSet, Graph, GraphError, VertexSet};
pub use instance::{Boundary, Certificate, Instance, InstanceError, Variant, Verdict};
