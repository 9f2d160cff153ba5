//! Two agents: sequences of adjacent maximal schedules that end in the
//! swap of their first schedule, and picking an EF1 schedule from them.

mod alternating;
mod interval;

use std::fmt;

use serde::Serialize;

use crate::checkers::{check_ef1, maximality_gap};
use crate::error::{Error, Result};
use crate::graph::ConflictGraph;
use crate::instance::Instance;
use crate::schedule::Schedule;
use crate::{AgentId, ChoreId};

pub use alternating::{interval_sequence_ef2, path_sequence, Completion, Ef2Sequence};
pub use interval::{
    classify, classify_supported, interval_sequence_ef1, phase2, phase2_postconditions, ChoreClassification,
    Phase2Outcome, PostconditionViolation,
};

/// Which rule produced a step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepTag {
    Initial,
    /// A step of the alternating-colour constructions.
    Step,
    Phase2CaseI,
    Phase2CaseII,
    Phase2CaseIIIa,
    Phase2CaseIIIb,
    Phase2CaseIIIc,
    Phase3,
}

impl fmt::Display for StepTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepTag::Initial => "initial",
            StepTag::Step => "step",
            StepTag::Phase2CaseI => "phase2-case-i",
            StepTag::Phase2CaseII => "phase2-case-ii",
            StepTag::Phase2CaseIIIa => "phase2-case-iii-a",
            StepTag::Phase2CaseIIIb => "phase2-case-iii-b",
            StepTag::Phase2CaseIIIc => "phase2-case-iii-c",
            StepTag::Phase3 => "phase3",
        })
    }
}

/// Schedules for two agents, consecutive ones adjacent, the last one the
/// bundle swap of the first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScheduleSequence {
    pub steps: Vec<Schedule>,
    pub tags: Vec<StepTag>,
}

impl ScheduleSequence {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn first(&self) -> &Schedule {
        &self.steps[0]
    }

    pub fn last(&self) -> &Schedule {
        self.steps.last().expect("sequences are never empty")
    }

    pub fn endpoints_swapped(&self) -> bool {
        !self.steps.is_empty() && self.first().swapped(0, 1) == *self.last()
    }

    /// Index of the first consecutive pair that is not adjacent.
    pub fn first_non_adjacent(&self) -> Option<usize> {
        self.steps.windows(2).position(|w| !bundles_adjacent(&w[0], &w[1]))
    }

    /// Index of the first step that is infeasible or not maximal.
    pub fn first_non_maximal(&self, graph: &ConflictGraph) -> Option<usize> {
        self.steps
            .iter()
            .position(|s| s.first_conflict(graph).is_some() || maximality_gap(s, graph).is_some())
    }

    /// One line per step: the colour of every chore in id order (`R` for
    /// agent 0, `B` for agent 1, `N` for unassigned) and the step's tag.
    pub fn trace(&self) -> String {
        let width = self.steps.len().saturating_sub(1).to_string().len();
        self.steps
            .iter()
            .zip(&self.tags)
            .enumerate()
            .map(|(i, (s, tag))| format!("{i:>width$}  {}  {tag}\n", colours(s)))
            .collect()
    }
}

/// `R`/`B`/`N` per chore in id order.
pub fn colours(schedule: &Schedule) -> String {
    schedule
        .assignment()
        .iter()
        .map(|a| match a {
            Some(0) => 'R',
            Some(1) => 'B',
            Some(_) => '?',
            None => 'N',
        })
        .collect()
}

fn bundles_adjacent(x: &Schedule, y: &Schedule) -> bool {
    (0..x.agents()).all(|agent| {
        let (mut added, mut removed) = (0, 0);
        for (a, b) in x.assignment().iter().zip(y.assignment()) {
            let (was, is) = (*a == Some(agent), *b == Some(agent));
            added += usize::from(is && !was);
            removed += usize::from(was && !is);
        }
        added <= 1 && removed <= 1
    })
}

/// Each bundle gains at most one chore and loses at most one chore.
pub fn adjacent(x: &Schedule, y: &Schedule) -> Result<bool> {
    for s in [x, y] {
        if s.agents() != 2 {
            return Err(Error::AgentCount {
                expected: 2,
                found: s.agents(),
            });
        }
    }
    if x.chore_count() != y.chore_count() {
        return Err(Error::InvalidParameters(format!(
            "schedules cover {} and {} chores",
            x.chore_count(),
            y.chore_count()
        )));
    }
    Ok(bundles_adjacent(x, y))
}

pub(crate) fn require_two_agents(instance: &Instance) -> Result<()> {
    if instance.agents() != 2 {
        return Err(Error::AgentCount {
            expected: 2,
            found: instance.agents(),
        });
    }
    Ok(())
}

/// Picks an EF1 schedule from a sequence. Finds the first consecutive pair
/// where agent 0's envy changes and tries both schedules and their swaps;
/// if agent 0 never changes its mind, tries the endpoints and their swaps.
pub fn select_ef1(sequence: &ScheduleSequence, instance: &Instance) -> Result<Schedule> {
    require_two_agents(instance)?;
    if sequence.is_empty() {
        return Err(Error::InvalidParameters("empty schedule sequence".into()));
    }
    let envies = |s: &Schedule| {
        let bundles = s.bundles();
        instance.value(0, &bundles[0]) < instance.value(0, &bundles[1])
    };
    let mut previous = envies(sequence.first());
    let mut pair = None;
    for i in 1..sequence.len() {
        let now = envies(&sequence.steps[i]);
        if now != previous {
            pair = Some((i - 1, i));
            break;
        }
        previous = now;
    }
    let (a, b) = pair.unwrap_or((0, sequence.len() - 1));
    let (x, y) = (&sequence.steps[a], &sequence.steps[b]);
    for candidate in [x.clone(), y.clone(), x.swapped(0, 1), y.swapped(0, 1)] {
        if check_ef1(&candidate, instance)?.holds {
            return Ok(candidate);
        }
    }
    Err(Error::Internal(format!("none of steps {a}, {b} or their swaps is EF1")))
}

/// EF1 and maximal schedule for two agents on any interval instance.
pub fn solve_two_agents(instance: &Instance) -> Result<Schedule> {
    let sequence = interval_sequence_ef1(instance)?;
    select_ef1(&sequence, instance)
}

/// EF1 and maximal schedule for two agents on a path (or disjoint paths),
/// using the simpler path sequence.
pub fn solve_two_agents_path(instance: &Instance) -> Result<Schedule> {
    let sequence = path_sequence(instance)?;
    select_ef1(&sequence, instance)
}

/// `agent` for marked chores coloured alternately starting with agent 0.
pub(crate) fn alternating(h: usize) -> AgentId {
    h % 2
}

pub(crate) fn schedule_with(chores: usize, pairs: impl IntoIterator<Item = (ChoreId, AgentId)>) -> Schedule {
    let mut s = Schedule::empty(2, chores);
    for (c, a) in pairs {
        s.set(c, Some(a));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checkers::is_maximal;
    use crate::golden;
    use crate::instance::path_instance;

    #[test]
    fn adjacency() {
        let x = schedule_with(3, [(0, 0), (1, 1)]);
        assert!(adjacent(&x, &x).unwrap());
        assert!(adjacent(&x, &x.swapped(0, 1)).unwrap());
        let y = schedule_with(3, [(0, 0), (1, 0), (2, 0)]);
        let z = schedule_with(3, [(1, 1)]);
        assert!(!adjacent(&y, &z).unwrap());
        let three = Schedule::empty(3, 3);
        assert!(adjacent(&three, &three).is_err());
    }

    #[test]
    fn select_returns_first_step_when_ef() {
        let inst = path_instance(vec![vec![-1, -1]; 2]).unwrap();
        let seq = path_sequence(&inst).unwrap();
        assert_eq!(select_ef1(&seq, &inst).unwrap(), seq.steps[0]);
    }

    #[test]
    fn golden_efx_instance() {
        let inst = golden::efx_maximal();
        for s in [solve_two_agents(&inst).unwrap(), solve_two_agents_path(&inst).unwrap()] {
            assert!(check_ef1(&s, &inst).unwrap().holds);
            assert!(is_maximal(&s, inst.graph()).unwrap());
        }
    }

    #[test]
    fn single_chore() {
        let inst = path_instance(vec![vec![-3]; 2]).unwrap();
        let s = solve_two_agents(&inst).unwrap();
        assert!(s.is_complete());
    }

    #[test]
    fn trace_format() {
        let inst = path_instance(vec![vec![-1; 3]; 2]).unwrap();
        let trace = path_sequence(&inst).unwrap().trace();
        assert_eq!(trace, "0  RBR  initial\n1  BNR  step\n2  BRB  step\n");
    }

    #[test]
    fn rejects_three_agents() {
        let inst = path_instance(vec![vec![-1; 3]; 3]).unwrap();
        assert!(matches!(solve_two_agents(&inst), Err(Error::AgentCount { .. })));
    }
}
