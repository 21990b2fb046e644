//! Exact solver suite for Bicluster Editing: given a bipartite graph and a
//! budget `k`, decide whether at most `k` edge insertions and deletions turn
//! it into a disjoint union of complete bipartite graphs.

pub mod analysis;
pub mod generate;
pub mod graph;
pub mod io;
pub mod kernel;
pub mod oracle;
pub mod solver;
pub mod verify;

pub use analysis::{BranchingVector, RootResult};
pub use graph::{BipartiteGraph, EditSet, Side, VertexRef};
pub use kernel::{kernelize, Instance, Kernel, KernelTrace};
pub use solver::{solve_decision, solve_optimal, SolveResult, SolverConfig};

/// Root-finding results in double precision.
pub type RootResultF64 = RootResult<f64>;
/// Root-finding results in single precision.
pub type RootResultF32 = RootResult<f32>;
