//! Fair and efficient scheduling of indivisible chores whose time
//! intervals conflict.
//!
//! Chores are half-open intervals; two chores conflict when their
//! intervals intersect, and no agent may hold two conflicting chores. The
//! crate provides fairness and efficiency checkers, an exhaustive oracle
//! for small instances, an EF1 and maximal solver for two agents on any
//! interval graph, and EF1 and maximal solvers for more agents under
//! identical valuations.

pub mod checkers;
pub mod error;
pub mod generate;
pub mod golden;
pub mod graph;
pub mod instance;
pub mod io;
pub mod n_agent;
pub mod oracle;
pub mod schedule;
pub mod two_agent;
pub mod valuation;

/// Dense chore index `0..m`.
pub type ChoreId = usize;
/// Dense agent index `0..n`.
pub type AgentId = usize;

pub use checkers::{
    check_ef, check_ef1, check_efk, check_efx, is_complete, is_maximal, is_pareto_optimal, FairnessVerdict,
};
pub use error::{Error, Result};
pub use graph::{build_conflict_graph, ConflictGraph};
pub use instance::{order_by_finish, path_instance, Chore, Instance};
pub use schedule::{is_feasible, Schedule};
pub use valuation::{BundleValuation, Valuations};
