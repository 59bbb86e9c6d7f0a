//! Minimum-weight bipartite matching.
//!
//! Three exact solvers for the assignment problem on integer-weighted
//! bipartite graphs, all returning a minimum-weight matching that covers
//! every right vertex:
//!
//! - [`auction`]: ε-scaling auction on integer-scaled weights;
//! - [`gk`]: Goldberg–Kennedy cost-scaling push-relabel, kept faithful to
//!   its flow formulation so that its step sequence can be compared with
//!   the auction's ([`trace`]);
//! - [`hungarian`]: successive shortest paths with dual potentials.
//!
//! [`gen`] produces random instances, [`oracle`] solves tiny ones by
//! enumeration, [`reduction`] balances tall instances for the two scaling
//! solvers and [`bench`] runs parameter grids.

pub mod auction;
pub mod bench;
pub mod error;
pub mod feasibility;
pub mod gen;
pub mod gk;
pub mod graph;
pub mod hungarian;
pub mod io;
pub mod oracle;
pub mod reduction;
pub mod solve;
pub mod trace;

pub use error::{Error, Result};
pub use feasibility::feasibility_precheck;
pub use graph::{Matching, MatchingViolation, PriceVector, WeightedBipartiteGraph};
pub use solve::{solve, Algorithm, ReductionKind, Solution, SolveOptions};
