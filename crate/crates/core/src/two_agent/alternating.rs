//! The alternating-colour sequences: exact for paths, and up to one
//! missing chore for interval graphs.

use serde::Serialize;

use crate::checkers::maximality_gap;
use crate::error::{Error, Result};
use crate::graph::ConflictGraph;
use crate::instance::{path_order, Instance};
use crate::schedule::Schedule;
use crate::{AgentId, ChoreId};

use super::{classify, require_two_agents, schedule_with, ScheduleSequence, StepTag};

/// Colours `order` alternately, then walks the colours over to the swap
/// one chore at a time. Each chore of `order` may conflict only with its
/// predecessor and successor in `order`.
///
/// Step `i` (for `1 <= i <= k-2`, zero-based) swaps everything before
/// `order[i]`, keeps everything after it, and places `order[i]` wherever it
/// fits: unassigned if it conflicts with both neighbours, with the
/// predecessor's agent if it conflicts only with the successor, and with
/// the successor's agent otherwise.
fn alternating_steps(order: &[ChoreId], graph: &ConflictGraph, chores: usize) -> ScheduleSequence {
    let k = order.len();
    let steps: Vec<Schedule> = match k {
        0 => vec![Schedule::empty(2, chores)],
        1 => vec![
            schedule_with(chores, [(order[0], 0)]),
            schedule_with(chores, [(order[0], 1)]),
        ],
        _ => {
            let mut steps = Vec::with_capacity(k);
            steps.push(schedule_with(
                chores,
                order.iter().enumerate().map(|(h, &c)| (c, h % 2)),
            ));
            for i in 1..k - 1 {
                let before = order[..i].iter().enumerate().map(|(h, &c)| (c, 1 - h % 2));
                let after = order[i + 1..].iter().enumerate().map(|(d, &c)| (c, (i + 1 + d) % 2));
                let mut s = schedule_with(chores, before.chain(after));
                let (prev, cur, next) = (order[i - 1], order[i], order[i + 1]);
                let (hits_prev, hits_next) = (graph.conflicts(cur, prev), graph.conflicts(cur, next));
                let agent = match (hits_prev, hits_next) {
                    (true, true) => None,
                    (false, true) => s.agent_of(prev),
                    _ => s.agent_of(next),
                };
                s.set(cur, agent);
                steps.push(s);
            }
            steps.push(schedule_with(
                chores,
                order.iter().enumerate().map(|(h, &c)| (c, 1 - h % 2)),
            ));
            steps
        }
    };
    let tags = (0..steps.len())
        .map(|i| if i == 0 { StepTag::Initial } else { StepTag::Step })
        .collect();
    ScheduleSequence { steps, tags }
}

/// The path sequence: every step complete except for the one chore being
/// moved, which is left out when it conflicts with both neighbours.
///
/// Disjoint unions of paths are accepted; their components are walked one
/// after another. With a single chore the sequence is the chore with agent
/// 0 followed by the chore with agent 1.
pub fn path_sequence(instance: &Instance) -> Result<ScheduleSequence> {
    require_two_agents(instance)?;
    let order = path_order(instance).ok_or(Error::NotPath)?;
    Ok(alternating_steps(&order, instance.graph(), instance.chore_count()))
}

/// A single chore whose addition makes a step maximal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Completion {
    pub chore: ChoreId,
    pub agent: AgentId,
}

#[derive(Clone, Debug)]
pub struct Ef2Sequence {
    pub sequence: ScheduleSequence,
    /// Per step: `None` if the step is already maximal.
    pub hints: Vec<Option<Completion>>,
}

impl Ef2Sequence {
    /// Step `i` with its completion applied.
    pub fn completed(&self, i: usize) -> Schedule {
        let mut s = self.sequence.steps[i].clone();
        if let Some(hint) = self.hints[i] {
            s.set(hint.chore, Some(hint.agent));
        }
        s
    }
}

/// The alternating sequence over the marked chores only (those overlapping
/// fewer than two earlier-finishing marked chores). Unmarked chores stay
/// unassigned throughout; each step becomes maximal after adding at most
/// one of them, given by the step's hint.
pub fn interval_sequence_ef2(instance: &Instance) -> Result<Ef2Sequence> {
    require_two_agents(instance)?;
    let cls = classify(instance);
    let graph = instance.graph();
    let sequence = alternating_steps(&cls.marked, graph, instance.chore_count());
    let mut hints = Vec::with_capacity(sequence.len());
    for (i, step) in sequence.steps.iter().enumerate() {
        let hint = completion_hint(step, &cls.finish_order, &cls.marked, &cls.rank, graph);
        if let Some(h) = hint {
            let mut s = step.clone();
            s.set(h.chore, Some(h.agent));
            if let Some((c, a)) = maximality_gap(&s, graph) {
                return Err(Error::Internal(format!(
                    "step {i} is not maximal after adding chore {} (chore {c} still fits agent {a})",
                    h.chore
                )));
            }
        }
        hints.push(hint);
    }
    Ok(Ef2Sequence { sequence, hints })
}

/// The earliest-finishing chore that still fits a bundle, given to the
/// agent holding the next marked chore when it fits there.
fn completion_hint(
    step: &Schedule,
    finish_order: &[ChoreId],
    marked: &[ChoreId],
    rank: &[usize],
    graph: &ConflictGraph,
) -> Option<Completion> {
    let chore = finish_order
        .iter()
        .copied()
        .find(|&c| step.agent_of(c).is_none() && (0..2).any(|a| step.fits(c, a, graph)))?;
    let preferred = marked
        .iter()
        .copied()
        .find(|&m| rank[m] > rank[chore])
        .and_then(|m| step.agent_of(m))
        .filter(|&a| step.fits(chore, a, graph));
    let agent = preferred.unwrap_or_else(|| (0..2).find(|&a| step.fits(chore, a, graph)).expect("fits one"));
    Some(Completion { chore, agent })
}
