//! Exhaustive ground truth over small instances, plus replays of the
//! unconstrained-setting algorithms that break under conflicts.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::checkers::{check_ef, check_ef1, check_efk, check_efx, dominates, utilities, FairnessVerdict};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::n_agent::envy_graph;
use crate::schedule::Schedule;
use crate::{AgentId, ChoreId};

pub const DEFAULT_GUARD: usize = 16;

/// Fairness notion an existence query asks for. Every criterion is
/// evaluated over maximal schedules only.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    Ef,
    Ef1,
    Efx,
    Efk(usize),
    Ef1Po,
    Ef1Complete,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Criterion::Ef => f.write_str("ef"),
            Criterion::Ef1 => f.write_str("ef1"),
            Criterion::Efx => f.write_str("efx"),
            Criterion::Efk(k) => write!(f, "ef{k}"),
            Criterion::Ef1Po => f.write_str("ef1-po"),
            Criterion::Ef1Complete => f.write_str("ef1-complete"),
        }
    }
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        Ok(match lower.as_str() {
            "ef" => Criterion::Ef,
            "ef1" => Criterion::Ef1,
            "efx" => Criterion::Efx,
            "ef1-po" | "ef1+po" => Criterion::Ef1Po,
            "ef1-complete" | "ef1+complete" => Criterion::Ef1Complete,
            other => {
                let k = other
                    .strip_prefix("efk:")
                    .or_else(|| other.strip_prefix("ef"))
                    .and_then(|k| k.parse().ok())
                    .ok_or_else(|| Error::InvalidParameters(format!("unknown criterion `{s}`")))?;
                Criterion::Efk(k)
            }
        })
    }
}

impl Criterion {
    /// Evaluates the fairness half of the criterion on one schedule.
    pub fn verdict(&self, schedule: &Schedule, instance: &Instance) -> Result<FairnessVerdict> {
        match self {
            Criterion::Ef => check_ef(schedule, instance),
            Criterion::Ef1 | Criterion::Ef1Po | Criterion::Ef1Complete => check_ef1(schedule, instance),
            Criterion::Efx => check_efx(schedule, instance),
            Criterion::Efk(k) => check_efk(schedule, instance, *k),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExistenceQuery {
    pub criterion: Criterion,
    pub guard: Option<usize>,
}

impl ExistenceQuery {
    pub fn new(criterion: Criterion) -> Self {
        ExistenceQuery { criterion, guard: None }
    }
}

fn check_guard(instance: &Instance, guard: usize) -> Result<()> {
    if instance.chore_count() > guard {
        return Err(Error::GuardExceeded {
            chores: instance.chore_count(),
            guard,
        });
    }
    Ok(())
}

/// Calls `visit` on every maximal schedule, in lexicographic order of the
/// assignment vector with "unassigned" before agent 0 before agent 1, and
/// so on. `visit` returns `false` to stop early.
pub fn for_each_maximal(instance: &Instance, guard: usize, mut visit: impl FnMut(&Schedule) -> bool) -> Result<()> {
    check_guard(instance, guard)?;
    let graph = instance.graph();
    let m = instance.chore_count();
    let n = instance.agents();
    // An unassigned chore can be judged once its last neighbour is decided.
    let mut closes_at: Vec<Vec<ChoreId>> = vec![Vec::new(); m];
    for c in 0..m {
        let last = graph.neighbors(c).iter().copied().chain([c]).max().unwrap_or(c);
        closes_at[last].push(c);
    }
    let earlier: Vec<Vec<ChoreId>> = (0..m)
        .map(|c| graph.neighbors(c).iter().copied().filter(|&x| x < c).collect())
        .collect();

    struct Search<'a, F> {
        n: usize,
        graph: &'a crate::graph::ConflictGraph,
        closes_at: &'a [Vec<ChoreId>],
        earlier: &'a [Vec<ChoreId>],
        schedule: Schedule,
        visit: F,
        stopped: bool,
    }

    impl<F: FnMut(&Schedule) -> bool> Search<'_, F> {
        fn blocked(&self, c: ChoreId) -> bool {
            (0..self.n).all(|a| !self.schedule.fits(c, a, self.graph))
        }

        fn go(&mut self, depth: usize) {
            if self.stopped {
                return;
            }
            if depth == self.schedule.chore_count() {
                if !(self.visit)(&self.schedule) {
                    self.stopped = true;
                }
                return;
            }
            let options = std::iter::once(None).chain((0..self.n).map(Some));
            for option in options {
                if let Some(a) = option {
                    if self.earlier[depth]
                        .iter()
                        .any(|&x| self.schedule.agent_of(x) == Some(a))
                    {
                        continue;
                    }
                }
                self.schedule.set(depth, option);
                let ok = self.closes_at[depth]
                    .iter()
                    .all(|&c| self.schedule.agent_of(c).is_some() || self.blocked(c));
                if ok {
                    self.go(depth + 1);
                }
                self.schedule.set(depth, None);
                if self.stopped {
                    return;
                }
            }
        }
    }

    let mut search = Search {
        n,
        graph,
        closes_at: &closes_at,
        earlier: &earlier,
        schedule: Schedule::empty(n, m),
        visit: &mut visit,
        stopped: false,
    };
    search.go(0);
    Ok(())
}

/// All maximal schedules in enumeration order.
pub fn enumerate_maximal(instance: &Instance, guard: usize) -> Result<Vec<Schedule>> {
    let mut out = Vec::new();
    for_each_maximal(instance, guard, |s| {
        out.push(s.clone());
        true
    })?;
    Ok(out)
}

/// A maximal schedule satisfying the query's criterion, or `None` when no
/// such schedule exists.
pub fn exists(instance: &Instance, query: &ExistenceQuery) -> Result<Option<Schedule>> {
    let guard = query.guard.unwrap_or(DEFAULT_GUARD);
    check_guard(instance, guard)?;
    match query.criterion {
        Criterion::Ef1Po => {
            let all = enumerate_maximal(instance, guard)?;
            let utils: Vec<Vec<i64>> = all.iter().map(|s| utilities(s, instance)).collect();
            for (idx, schedule) in all.iter().enumerate() {
                let dominated = utils.iter().any(|u| dominates(u, &utils[idx]));
                if !dominated && check_ef1(schedule, instance)?.holds {
                    return Ok(Some(schedule.clone()));
                }
            }
            Ok(None)
        }
        criterion => {
            let mut found = None;
            let mut failure = None;
            for_each_maximal(instance, guard, |s| {
                if criterion == Criterion::Ef1Complete && !s.is_complete() {
                    return true;
                }
                match criterion.verdict(s, instance) {
                    Ok(v) if v.holds => {
                        found = Some(s.clone());
                        false
                    }
                    Ok(_) => true,
                    Err(e) => {
                        failure = Some(e);
                        false
                    }
                }
            })?;
            match failure {
                Some(e) => Err(e),
                None => Ok(found),
            }
        }
    }
}

/// Among maximal schedules, the first one maximizing total value.
pub fn max_utilitarian_maximal(instance: &Instance, guard: usize) -> Result<Schedule> {
    let mut best: Option<(i64, Schedule)> = None;
    for_each_maximal(instance, guard, |s| {
        let total: i64 = utilities(s, instance).iter().sum();
        if best.as_ref().is_none_or(|(b, _)| total > *b) {
            best = Some((total, s.clone()));
        }
        true
    })?;
    Ok(best
        .expect("the empty-extension search always yields a maximal schedule")
        .1)
}

fn favourite_feasible(instance: &Instance, schedule: &Schedule, agent: AgentId, rows: &[Vec<i64>]) -> Option<ChoreId> {
    let graph = instance.graph();
    schedule
        .unassigned()
        .filter(|&c| schedule.fits(c, agent, graph))
        // Highest value, then lowest id.
        .max_by_key(|&c| (rows[agent][c], std::cmp::Reverse(c)))
}

/// Round robin where each agent, on its turn, takes its favourite chore
/// among those it can still feasibly perform. Agents with nothing feasible
/// are skipped; the run ends when nobody can pick.
pub fn demo_round_robin(instance: &Instance, agent_order: &[AgentId]) -> Result<(Schedule, FairnessVerdict)> {
    let rows = instance.valuations().additive().ok_or(Error::NotAdditive)?;
    if let Some(&bad) = agent_order.iter().find(|&&a| a >= instance.agents()) {
        return Err(Error::UnknownAgent(bad));
    }
    let mut schedule = Schedule::empty(instance.agents(), instance.chore_count());
    if !agent_order.is_empty() {
        let mut idle_turns = 0;
        let mut turn = 0;
        while idle_turns < agent_order.len() {
            let agent = agent_order[turn % agent_order.len()];
            turn += 1;
            match favourite_feasible(instance, &schedule, agent, rows) {
                Some(c) => {
                    schedule.set(c, Some(agent));
                    idle_turns = 0;
                }
                None => idle_turns += 1,
            }
        }
    }
    let verdict = check_ef1(&schedule, instance)?;
    Ok((schedule, verdict))
}

/// Top-trading envy-cycle elimination for identical valuations: a sink of
/// the envy graph (an agent envying nobody) takes its favourite feasible
/// chore. Ties go to the lowest-id sink and the lowest-id chore. When no
/// sink can take anything, the best-off agent that still can picks.
pub fn demo_top_trading_envy_cycle(instance: &Instance) -> Result<(Schedule, FairnessVerdict)> {
    let rows = instance.valuations().additive().ok_or(Error::NotAdditive)?;
    if !instance.valuations().is_identical() {
        return Err(Error::NotIdentical);
    }
    let n = instance.agents();
    let mut schedule = Schedule::empty(n, instance.chore_count());
    loop {
        let envy = envy_graph(&schedule, instance);
        let picks: Vec<(AgentId, ChoreId)> = (0..n)
            .filter_map(|a| favourite_feasible(instance, &schedule, a, rows).map(|c| (a, c)))
            .collect();
        if picks.is_empty() {
            break;
        }
        let values = utilities(&schedule, instance);
        let (agent, chore) = picks
            .iter()
            .copied()
            .find(|&(a, _)| envy.is_sink(a))
            .unwrap_or_else(|| {
                *picks
                    .iter()
                    .max_by_key(|&&(a, _)| (values[a], std::cmp::Reverse(a)))
                    .expect("non-empty")
            });
        schedule.set(chore, Some(agent));
    }
    let verdict = check_ef1(&schedule, instance)?;
    Ok((schedule, verdict))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checkers::{is_maximal, is_pareto_optimal};
    use crate::golden;
    use crate::instance::{path_instance, Chore};
    use crate::valuation::Valuations;

    #[test]
    fn single_chore_has_two_maximal_schedules() {
        let inst = path_instance(vec![vec![-1], vec![-1]]).unwrap();
        let all = enumerate_maximal(&inst, DEFAULT_GUARD).unwrap();
        assert_eq!(all.len(), 2);
        assert_eq!(all[0].assignment(), &[Some(0)]);
        assert_eq!(all[1].assignment(), &[Some(1)]);
    }

    #[test]
    fn triangle_never_completes() {
        let inst = Instance::new(
            2,
            (0..3).map(|i| Chore::new(i, 0, 5)).collect(),
            Valuations::Additive(vec![vec![-1; 3]; 2]),
        )
        .unwrap();
        let all = enumerate_maximal(&inst, DEFAULT_GUARD).unwrap();
        assert!(!all.is_empty());
        for s in &all {
            assert_eq!(s.assignment().iter().filter(|a| a.is_some()).count(), 2);
            assert!(!s.is_complete());
        }
        let q = ExistenceQuery::new(Criterion::Ef1Complete);
        assert_eq!(exists(&inst, &q).unwrap(), None);
    }

    #[test]
    fn enumeration_yields_maximal_schedules_only() {
        for s in enumerate_maximal(&golden::ef1_po(), DEFAULT_GUARD).unwrap() {
            assert!(is_maximal(&s, golden::ef1_po().graph()).unwrap());
        }
    }

    #[test]
    fn golden_non_existence() {
        let none = |inst: Instance, c| exists(&inst, &ExistenceQuery::new(c)).unwrap();
        assert_eq!(none(golden::efx_maximal(), Criterion::Efx), None);
        assert_eq!(none(golden::ef1_po(), Criterion::Ef1Po), None);
        assert_eq!(none(golden::ef1_complete(), Criterion::Ef1Complete), None);
        for inst in [golden::efx_maximal(), golden::ef1_po(), golden::ef1_complete()] {
            assert!(none(inst, Criterion::Ef1).is_some());
        }
    }

    #[test]
    fn round_robin_golden() {
        let (s, verdict) = demo_round_robin(&golden::round_robin(), &[0, 1]).unwrap();
        assert_eq!(s.bundles(), vec![vec![0, 2, 4, 6], vec![1, 3, 5, 7]]);
        assert!(!verdict.holds);
        assert!(verdict.violates(1, 0));
    }

    #[test]
    fn round_robin_edgeless_and_single() {
        let edgeless = Instance::new(
            2,
            (0..5).map(|i| Chore::new(i, 2 * i as u64, 2 * i as u64 + 1)).collect(),
            Valuations::Additive(vec![vec![-4, -1, -3, -2, -5]; 2]),
        )
        .unwrap();
        let (s, v) = demo_round_robin(&edgeless, &[0, 1]).unwrap();
        assert!(s.is_complete());
        assert!(v.holds);
        let single = path_instance(vec![vec![-2], vec![-2]]).unwrap();
        let (s, v) = demo_round_robin(&single, &[0, 1]).unwrap();
        assert_eq!(s.agent_of(0), Some(0));
        assert!(v.holds);
    }

    #[test]
    fn envy_cycle_golden() {
        let (s, verdict) = demo_top_trading_envy_cycle(&golden::envy_cycle()).unwrap();
        assert_eq!(s.bundles(), vec![vec![1, 3], vec![0, 2, 4]]);
        assert!(!verdict.holds);
        assert!(verdict.violates(1, 0));
    }

    #[test]
    fn envy_cycle_rejects_differing_valuations() {
        let inst = path_instance(vec![vec![-1, -2], vec![-2, -1]]).unwrap();
        assert!(matches!(demo_top_trading_envy_cycle(&inst), Err(Error::NotIdentical)));
    }

    #[test]
    fn utilitarian_optimum_on_ef1_po_instance() {
        let inst = golden::ef1_po();
        let best = max_utilitarian_maximal(&inst, DEFAULT_GUARD).unwrap();
        assert_eq!(utilities(&best, &inst).iter().sum::<i64>(), -5);
        assert_eq!(best.agent_of(1), None);
        assert_eq!(best.agent_of(3), None);
        assert!(is_pareto_optimal(&best, &inst).unwrap());
    }

    #[test]
    fn criterion_parsing() {
        assert_eq!("ef1".parse::<Criterion>().unwrap(), Criterion::Ef1);
        assert_eq!("EF2".parse::<Criterion>().unwrap(), Criterion::Efk(2));
        assert_eq!("efk:3".parse::<Criterion>().unwrap(), Criterion::Efk(3));
        assert_eq!("ef1-po".parse::<Criterion>().unwrap(), Criterion::Ef1Po);
        assert!("nash".parse::<Criterion>().is_err());
        for c in [Criterion::Ef, Criterion::Efx, Criterion::Efk(4), Criterion::Ef1Complete] {
            assert_eq!(c.to_string().parse::<Criterion>().unwrap(), c);
        }
    }

    #[test]
    fn guard_enforced() {
        let inst = path_instance(vec![vec![-1; 5]; 2]).unwrap();
        assert!(matches!(
            enumerate_maximal(&inst, 4),
            Err(Error::GuardExceeded { chores: 5, guard: 4 })
        ));
    }
}
