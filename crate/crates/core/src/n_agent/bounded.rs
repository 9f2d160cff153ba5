//! Identical additive valuations with every conflict component no larger
//! than the number of agents.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::schedule::Schedule;
use crate::{AgentId, ChoreId};

use super::envy::{envy_graph, EnvyGraph};

/// One component's round: the envy graph it started from, the turn order
/// and what each agent took.
#[derive(Clone, Debug, Serialize)]
pub struct ComponentStep {
    pub component: Vec<ChoreId>,
    pub envy_before: EnvyGraph,
    pub order: Vec<AgentId>,
    pub picks: Vec<(AgentId, ChoreId)>,
}

#[derive(Clone, Debug)]
pub struct BoundedRun {
    pub schedule: Schedule,
    pub steps: Vec<ComponentStep>,
    pub envy_after: EnvyGraph,
}

/// EF1 and complete (hence maximal) schedule for identical additive
/// valuations when no conflict component has more than `n` chores.
pub fn solve_identical_bounded_components(instance: &Instance) -> Result<Schedule> {
    run_identical_bounded_components(instance).map(|run| run.schedule)
}

/// Components are handled in order of earliest start. For each one the
/// agents are ordered best-off first (reverse topological order of the
/// envy graph, so nobody picks before an agent it envies) and each takes
/// the worst remaining chore of the component. Within a component every
/// agent gets at most one chore, so bundles stay independent.
pub fn run_identical_bounded_components(instance: &Instance) -> Result<BoundedRun> {
    let n = instance.agents();
    let valuations = instance.valuations();
    let rows = valuations.additive().ok_or(Error::NotAdditive)?;
    if !valuations.is_identical() {
        return Err(Error::NotIdentical);
    }
    let mut components = instance.graph().components();
    if let Some(big) = components.iter().find(|c| c.len() > n) {
        return Err(Error::ComponentTooLarge {
            size: big.len(),
            limit: n,
        });
    }
    let start_key = |comp: &Vec<ChoreId>| comp.iter().map(|&c| (instance.chore(c).start, c)).min();
    components.sort_by_key(start_key);

    let mut schedule = Schedule::empty(n, instance.chore_count());
    let mut steps = Vec::with_capacity(components.len());
    for component in components {
        let envy = envy_graph(&schedule, instance);
        let mut order = envy
            .topological_order()
            .ok_or_else(|| Error::Internal("envy graph has a cycle under identical valuations".into()))?;
        order.reverse();
        let mut worst_first = component.clone();
        worst_first.sort_by_key(|&c| (rows[0][c], c));
        let picks: Vec<(AgentId, ChoreId)> = order.iter().copied().zip(worst_first).collect();
        for &(agent, chore) in &picks {
            schedule.set(chore, Some(agent));
        }
        steps.push(ComponentStep {
            component,
            envy_before: envy,
            order,
            picks,
        });
    }
    if let Some((agent, a, b)) = schedule.first_conflict(instance.graph()) {
        return Err(Error::Internal(format!(
            "agent {agent} received conflicting chores {a} and {b}"
        )));
    }
    let envy_after = envy_graph(&schedule, instance);
    Ok(BoundedRun {
        schedule,
        steps,
        envy_after,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checkers::{check_ef1, is_maximal};
    use crate::instance::{path_instance, Chore};
    use crate::valuation::Valuations;

    #[test]
    fn edgeless_is_round_robin() {
        let chores = (0..5).map(|j| Chore::new(j, 3 * j as u64, 3 * j as u64 + 1)).collect();
        let inst = Instance::new(2, chores, Valuations::Additive(vec![vec![-4, -1, -3, -2, -5]; 2])).unwrap();
        let run = run_identical_bounded_components(&inst).unwrap();
        assert!(run.schedule.is_complete());
        assert!(check_ef1(&run.schedule, &inst).unwrap().holds);
        assert_eq!(run.steps.len(), 5);
        assert!(run.steps.iter().all(|s| s.envy_before.is_acyclic()));
    }

    #[test]
    fn pairs_on_two_agents() {
        // Path of two plus an isolated chore.
        let chores = vec![Chore::new(0, 0, 2), Chore::new(1, 1, 3), Chore::new(2, 5, 6)];
        let inst = Instance::new(2, chores, Valuations::Additive(vec![vec![-3, -1, -2]; 2])).unwrap();
        let s = solve_identical_bounded_components(&inst).unwrap();
        assert!(is_maximal(&s, inst.graph()).unwrap());
        assert!(check_ef1(&s, &inst).unwrap().holds);
        assert_ne!(s.agent_of(0), s.agent_of(1));
    }

    #[test]
    fn rejections() {
        let long = path_instance(vec![vec![-1; 3]; 2]).unwrap();
        assert_eq!(
            solve_identical_bounded_components(&long).unwrap_err(),
            Error::ComponentTooLarge { size: 3, limit: 2 }
        );
        let differing = path_instance(vec![vec![-1, -2], vec![-2, -1]]).unwrap();
        assert_eq!(
            solve_identical_bounded_components(&differing).unwrap_err(),
            Error::NotIdentical
        );
    }
}
