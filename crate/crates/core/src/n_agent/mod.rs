//! Solvers for any number of agents under restricted valuations.

mod bounded;
mod dichotomous;
mod envy;
mod split;

pub use bounded::{run_identical_bounded_components, solve_identical_bounded_components, BoundedRun, ComponentStep};
pub use dichotomous::{
    meta_agents, picking_sequence, run_identical_dichotomous_path, solve_identical_dichotomous_path, DichotomousRun,
    MetaAgent, PaddedAssignment,
};
pub use envy::{envy_graph, EnvyGraph};
pub use split::{split_pair_bundle, split_triple_bundle, Piece};
