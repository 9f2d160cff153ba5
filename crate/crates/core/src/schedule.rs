use crate::error::{Error, Result};
use crate::graph::ConflictGraph;
use crate::{AgentId, ChoreId};

/// A partial assignment of chores to agents. Bundles are disjoint by
/// construction since each chore maps to at most one agent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Schedule {
    agents: usize,
    assignment: Vec<Option<AgentId>>,
}

impl Schedule {
    /// Everything unassigned.
    pub fn empty(agents: usize, chores: usize) -> Self {
        Schedule {
            agents,
            assignment: vec![None; chores],
        }
    }

    pub fn from_assignment(agents: usize, assignment: Vec<Option<AgentId>>) -> Result<Self> {
        if let Some(&Some(bad)) = assignment.iter().find(|a| matches!(a, Some(x) if *x >= agents)) {
            return Err(Error::UnknownAgent(bad));
        }
        Ok(Schedule { agents, assignment })
    }

    pub fn from_bundles(agents: usize, chores: usize, bundles: &[Vec<ChoreId>]) -> Result<Self> {
        if bundles.len() != agents {
            return Err(Error::AgentCount {
                expected: agents,
                found: bundles.len(),
            });
        }
        let mut schedule = Schedule::empty(agents, chores);
        for (agent, bundle) in bundles.iter().enumerate() {
            for &c in bundle {
                match schedule.assignment.get(c) {
                    None => return Err(Error::UnknownChore(c)),
                    Some(Some(_)) => {
                        return Err(Error::InvalidInstance(format!(
                            "chore {c} appears in more than one bundle"
                        )))
                    }
                    Some(None) => schedule.assignment[c] = Some(agent),
                }
            }
        }
        Ok(schedule)
    }

    pub fn agents(&self) -> usize {
        self.agents
    }

    pub fn chore_count(&self) -> usize {
        self.assignment.len()
    }

    pub fn assignment(&self) -> &[Option<AgentId>] {
        &self.assignment
    }

    pub fn agent_of(&self, chore: ChoreId) -> Option<AgentId> {
        self.assignment[chore]
    }

    pub fn set(&mut self, chore: ChoreId, agent: Option<AgentId>) {
        debug_assert!(agent.is_none_or(|a| a < self.agents));
        self.assignment[chore] = agent;
    }

    pub fn bundle(&self, agent: AgentId) -> Vec<ChoreId> {
        self.assignment
            .iter()
            .enumerate()
            .filter(|(_, a)| **a == Some(agent))
            .map(|(c, _)| c)
            .collect()
    }

    pub fn bundles(&self) -> Vec<Vec<ChoreId>> {
        let mut out = vec![Vec::new(); self.agents];
        for (c, a) in self.assignment.iter().enumerate() {
            if let Some(a) = a {
                out[*a].push(c);
            }
        }
        out
    }

    pub fn unassigned(&self) -> impl Iterator<Item = ChoreId> + '_ {
        self.assignment
            .iter()
            .enumerate()
            .filter(|(_, a)| a.is_none())
            .map(|(c, _)| c)
    }

    pub fn is_complete(&self) -> bool {
        self.assignment.iter().all(Option::is_some)
    }

    /// Exchanges the bundles of agents `a` and `b`.
    pub fn swapped(&self, a: AgentId, b: AgentId) -> Schedule {
        let assignment = self
            .assignment
            .iter()
            .map(|x| match x {
                Some(x) if *x == a => Some(b),
                Some(x) if *x == b => Some(a),
                other => *other,
            })
            .collect();
        Schedule {
            agents: self.agents,
            assignment,
        }
    }

    /// Whether `chore` could join `agent`'s bundle without a conflict,
    /// ignoring where `chore` currently sits.
    pub fn fits(&self, chore: ChoreId, agent: AgentId, graph: &ConflictGraph) -> bool {
        graph
            .neighbors(chore)
            .iter()
            .all(|&n| self.assignment[n] != Some(agent))
    }

    /// The first pair of same-bundle conflicting chores, if any.
    pub fn first_conflict(&self, graph: &ConflictGraph) -> Option<(AgentId, ChoreId, ChoreId)> {
        for (a, b) in graph.edges() {
            if let (Some(x), Some(y)) = (self.assignment[a], self.assignment[b]) {
                if x == y {
                    return Some((x, a, b));
                }
            }
        }
        None
    }

    pub(crate) fn check_shape(&self, graph: &ConflictGraph) -> Result<()> {
        if self.assignment.len() != graph.len() {
            return Err(Error::UnknownChore(self.assignment.len().max(graph.len()) - 1));
        }
        Ok(())
    }
}

/// True iff every bundle is an independent set of the conflict graph.
pub fn is_feasible(schedule: &Schedule, graph: &ConflictGraph) -> Result<bool> {
    schedule.check_shape(graph)?;
    Ok(schedule.first_conflict(graph).is_none())
}

pub(crate) fn require_feasible(schedule: &Schedule, graph: &ConflictGraph) -> Result<()> {
    schedule.check_shape(graph)?;
    match schedule.first_conflict(graph) {
        Some((agent, first, second)) => Err(Error::Infeasible { agent, first, second }),
        None => Ok(()),
    }
}
