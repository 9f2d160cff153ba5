use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("valuation matrix is ragged: row {row} has {found} entries, expected {expected}")]
    RaggedMatrix { row: usize, expected: usize, found: usize },
    #[error("unknown chore id {0}")]
    UnknownChore(usize),
    #[error("unknown agent index {0}")]
    UnknownAgent(usize),
    #[error("schedule is infeasible: agent {agent} holds conflicting chores {first} and {second}")]
    Infeasible { agent: usize, first: usize, second: usize },
    #[error("schedule is not maximal")]
    NotMaximal,
    #[error("expected {expected} agents, found {found}")]
    AgentCount { expected: usize, found: usize },
    #[error("at least {min} agents required, found {found}")]
    TooFewAgents { min: usize, found: usize },
    #[error("conflict graph is not a path")]
    NotPath,
    #[error("valuations are not identical across agents")]
    NotIdentical,
    #[error("valuations are not dichotomous")]
    NotDichotomous,
    #[error("operation requires additive valuations")]
    NotAdditive,
    #[error("conflict component of size {size} exceeds the agent count {limit}")]
    ComponentTooLarge { size: usize, limit: usize },
    #[error("instance has {chores} chores, over the enumeration guard of {guard}")]
    GuardExceeded { chores: usize, guard: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    /// An internal invariant failed. Reaching this is a bug, not an input problem.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
