use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{build_conflict_graph, ConflictGraph};
use crate::valuation::Valuations;
use crate::{AgentId, ChoreId};

/// A task occupying the half-open interval `[start, finish)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chore {
    pub id: ChoreId,
    pub start: u64,
    pub finish: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl Chore {
    pub fn new(id: ChoreId, start: u64, finish: u64) -> Self {
        Chore {
            id,
            start,
            finish,
            label: None,
        }
    }
}

/// Agents, chores, and valuations, with the conflict graph derived once.
#[derive(Clone, Debug)]
pub struct Instance {
    agents: usize,
    chores: Vec<Chore>,
    valuations: Valuations,
    graph: ConflictGraph,
}

impl Instance {
    pub fn new(agents: usize, mut chores: Vec<Chore>, valuations: Valuations) -> Result<Self> {
        if agents == 0 {
            return Err(Error::InvalidInstance("at least one agent is required".into()));
        }
        chores.sort_by_key(|c| c.id);
        for (index, chore) in chores.iter().enumerate() {
            if chore.id != index {
                return Err(Error::InvalidInstance(format!(
                    "chore ids must be unique and form 0..{}; missing or duplicate id near {}",
                    chores.len(),
                    index
                )));
            }
            if chore.finish <= chore.start {
                return Err(Error::InvalidInstance(format!(
                    "chore {} finishes at {} which is not after its start {}",
                    chore.id, chore.finish, chore.start
                )));
            }
        }
        valuations.validate(agents, chores.len())?;
        let graph = build_conflict_graph(&chores);
        Ok(Instance {
            agents,
            chores,
            valuations,
            graph,
        })
    }

    pub fn agents(&self) -> usize {
        self.agents
    }

    pub fn chore_count(&self) -> usize {
        self.chores.len()
    }

    pub fn chores(&self) -> &[Chore] {
        &self.chores
    }

    pub fn chore(&self, id: ChoreId) -> &Chore {
        &self.chores[id]
    }

    pub fn valuations(&self) -> &Valuations {
        &self.valuations
    }

    pub fn graph(&self) -> &ConflictGraph {
        &self.graph
    }

    pub fn value(&self, agent: AgentId, bundle: &[ChoreId]) -> i64 {
        self.valuations.value(agent, bundle)
    }

    /// Same chores and graph, different valuations.
    pub fn with_valuations(&self, valuations: Valuations) -> Result<Self> {
        Instance::new(self.agents, self.chores.clone(), valuations)
    }
}

/// Builds an instance whose conflict graph is exactly the path
/// `c_0 - c_1 - ... - c_{m-1}`: chore `j` occupies `[j, j + 2)`.
pub fn path_instance(values_per_agent: Vec<Vec<i64>>) -> Result<Instance> {
    let agents = values_per_agent.len();
    let m = values_per_agent.first().map_or(0, Vec::len);
    for (row, values) in values_per_agent.iter().enumerate() {
        if values.len() != m {
            return Err(Error::RaggedMatrix {
                row,
                expected: m,
                found: values.len(),
            });
        }
    }
    let chores = (0..m).map(|j| Chore::new(j, j as u64, j as u64 + 2)).collect();
    Instance::new(agents, chores, Valuations::Additive(values_per_agent))
}

/// Chore ids in non-decreasing finish order, ties by ascending id.
pub fn order_by_finish(chores: &[Chore]) -> Vec<ChoreId> {
    let mut keyed: Vec<(u64, ChoreId)> = chores.iter().map(|c| (c.finish, c.id)).collect();
    keyed.sort_unstable();
    keyed.into_iter().map(|(_, id)| id).collect()
}

/// Walks every path component of a linear forest from the end that starts
/// earlier; components are emitted by earliest start. Returns `None` when
/// the graph is not a linear forest.
pub fn path_order(instance: &Instance) -> Option<Vec<ChoreId>> {
    let graph = instance.graph();
    if !graph.is_linear_forest() {
        return None;
    }
    let key = |id: ChoreId| (instance.chore(id).start, instance.chore(id).finish, id);
    let mut components = graph.components();
    components.sort_by_key(|comp| comp.iter().map(|&c| key(c)).min());
    let mut order = Vec::with_capacity(instance.chore_count());
    for comp in components {
        let first = comp
            .iter()
            .copied()
            .filter(|&c| graph.degree(c) <= 1)
            .min_by_key(|&c| key(c))
            .expect("a path component has an endpoint");
        let mut prev = None;
        let mut current = first;
        loop {
            order.push(current);
            let next = graph.neighbors(current).iter().copied().find(|&n| Some(n) != prev);
            match next {
                Some(n) => {
                    prev = Some(current);
                    current = n;
                }
                None => break,
            }
        }
    }
    Some(order)
}
