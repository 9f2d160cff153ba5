use std::collections::BTreeSet;

use serde::Serialize;

use crate::instance::Instance;
use crate::schedule::Schedule;
use crate::AgentId;

/// Directed graph with an edge `i -> k` whenever agent `i` envies agent `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnvyGraph {
    out: Vec<Vec<AgentId>>,
}

pub fn envy_graph(schedule: &Schedule, instance: &Instance) -> EnvyGraph {
    let bundles = schedule.bundles();
    let n = schedule.agents();
    let out = (0..n)
        .map(|i| {
            let own = instance.value(i, &bundles[i]);
            (0..n)
                .filter(|&k| k != i && own < instance.value(i, &bundles[k]))
                .collect()
        })
        .collect();
    EnvyGraph { out }
}

impl EnvyGraph {
    pub fn agents(&self) -> usize {
        self.out.len()
    }

    pub fn envies(&self, i: AgentId, k: AgentId) -> bool {
        self.out[i].contains(&k)
    }

    pub fn edges(&self) -> impl Iterator<Item = (AgentId, AgentId)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(i, list)| list.iter().map(move |&k| (i, k)))
    }

    /// Envies nobody.
    pub fn is_sink(&self, agent: AgentId) -> bool {
        self.out[agent].is_empty()
    }

    /// Kahn's algorithm, always releasing the lowest-numbered ready agent.
    /// `None` when the graph has a cycle.
    pub fn topological_order(&self) -> Option<Vec<AgentId>> {
        let n = self.agents();
        let mut indegree = vec![0usize; n];
        for (_, k) in self.edges() {
            indegree[k] += 1;
        }
        let mut ready: BTreeSet<AgentId> = (0..n).filter(|&a| indegree[a] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(a) = ready.pop_first() {
            order.push(a);
            for &k in &self.out[a] {
                indegree[k] -= 1;
                if indegree[k] == 0 {
                    ready.insert(k);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }
}
