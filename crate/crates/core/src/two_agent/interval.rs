//! The three-phase construction of a sequence of adjacent maximal
//! schedules for two agents on any interval graph.
//!
//! Phase 1 colours the marked chores alternately. Phase 2 scans the
//! buckets of unmarked chores right to left and, whenever one holds an
//! unsupported chore, recolours a few chores so that it becomes supported.
//! Phase 3 walks left to right moving every chore to its target (the swap
//! of its Phase 1 colour, or unassigned for unmarked chores), together with
//! at most one follower per step.

use std::fmt;

use serde::Serialize;

use crate::checkers::maximality_gap;
use crate::error::{Error, Result};
use crate::graph::ConflictGraph;
use crate::instance::{order_by_finish, Instance};
use crate::schedule::Schedule;
use crate::{AgentId, ChoreId};

use super::{alternating, bundles_adjacent, require_two_agents, ScheduleSequence, StepTag};

/// Phase 1 classification of the chores.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChoreClassification {
    /// All chores by finish time, ties by id.
    pub finish_order: Vec<ChoreId>,
    /// Position of each chore in `finish_order`.
    pub rank: Vec<usize>,
    /// Marked chores `c_0, c_1, ...` in finish order.
    pub marked: Vec<ChoreId>,
    /// Index `h` of each marked chore in `marked`.
    pub marked_index: Vec<Option<usize>>,
    /// For each unmarked chore, the bucket `h` such that it finishes
    /// between `c_h` and `c_{h+1}`.
    pub bucket_of: Vec<Option<usize>>,
    /// `buckets[h]`: unmarked chores between `c_h` and `c_{h+1}`, in finish
    /// order. `buckets[0]` is always empty.
    pub buckets: Vec<Vec<ChoreId>>,
}

impl ChoreClassification {
    pub fn is_marked(&self, chore: ChoreId) -> bool {
        self.marked_index[chore].is_some()
    }

    /// Agent holding the chore in the first schedule.
    pub fn source(&self, chore: ChoreId) -> Option<AgentId> {
        self.marked_index[chore].map(alternating)
    }

    /// Agent holding the chore in the last schedule.
    pub fn target(&self, chore: ChoreId) -> Option<AgentId> {
        self.source(chore).map(|a| 1 - a)
    }

    /// The first schedule: marked chores alternate, unmarked are left out.
    pub fn initial_schedule(&self) -> Schedule {
        let mut s = Schedule::empty(2, self.rank.len());
        for (c, a) in (0..self.rank.len()).map(|c| (c, self.source(c))) {
            s.set(c, a);
        }
        s
    }
}

/// A chore is unmarked iff it overlaps at least two marked chores that
/// finish before it.
pub fn classify(instance: &Instance) -> ChoreClassification {
    let m = instance.chore_count();
    let graph = instance.graph();
    let finish_order = order_by_finish(instance.chores());
    let mut rank = vec![0; m];
    for (r, &c) in finish_order.iter().enumerate() {
        rank[c] = r;
    }
    let mut marked = Vec::new();
    let mut marked_index = vec![None; m];
    let mut bucket_of = vec![None; m];
    let mut buckets: Vec<Vec<ChoreId>> = Vec::new();
    for &c in &finish_order {
        let earlier_marked = graph
            .neighbors(c)
            .iter()
            .filter(|&&n| rank[n] < rank[c] && marked_index[n].is_some())
            .count();
        if earlier_marked >= 2 {
            let h = marked.len() - 1;
            bucket_of[c] = Some(h);
            buckets[h].push(c);
        } else {
            marked_index[c] = Some(marked.len());
            marked.push(c);
            buckets.push(Vec::new());
        }
    }
    ChoreClassification {
        finish_order,
        rank,
        marked,
        marked_index,
        bucket_of,
        buckets,
    }
}

struct Overlaps {
    earlier: usize,
    later: usize,
}

fn assigned_overlaps(s: &Schedule, cls: &ChoreClassification, graph: &ConflictGraph, c: ChoreId) -> Overlaps {
    let mut o = Overlaps { earlier: 0, later: 0 };
    for &n in graph.neighbors(c) {
        if s.agent_of(n).is_some() {
            if cls.rank[n] < cls.rank[c] {
                o.earlier += 1;
            } else {
                o.later += 1;
            }
        }
    }
    o
}

/// Whether an unassigned chore is supported:
/// 1. it overlaps at least three assigned chores finishing earlier; or
/// 2. it lies in bucket `h`, `c_h` is assigned, and it overlaps a
///    later-finishing chore of the other agent; or
/// 3. it overlaps at least two assigned chores finishing later.
///
/// Condition 2 does not apply while `c_h` is unassigned.
fn is_supported(s: &Schedule, cls: &ChoreClassification, graph: &ConflictGraph, c: ChoreId) -> bool {
    let o = assigned_overlaps(s, cls, graph, c);
    if o.earlier >= 3 || o.later >= 2 {
        return true;
    }
    let Some(h) = cls.bucket_of[c] else {
        return false;
    };
    let Some(colour) = s.agent_of(cls.marked[h]) else {
        return false;
    };
    graph
        .neighbors(c)
        .iter()
        .any(|&n| cls.rank[n] > cls.rank[c] && s.agent_of(n) == Some(1 - colour))
}

/// Per chore: `true` if assigned or supported.
pub fn classify_supported(
    schedule: &Schedule,
    classification: &ChoreClassification,
    graph: &ConflictGraph,
) -> Vec<bool> {
    (0..schedule.chore_count())
        .map(|c| schedule.agent_of(c).is_some() || is_supported(schedule, classification, graph, c))
        .collect()
}

fn has_later_assigned(s: &Schedule, cls: &ChoreClassification, graph: &ConflictGraph, c: ChoreId) -> bool {
    assigned_overlaps(s, cls, graph, c).later > 0
}

struct Builder<'a> {
    graph: &'a ConflictGraph,
    current: Schedule,
    sequence: ScheduleSequence,
}

impl Builder<'_> {
    fn emit(&mut self, tag: StepTag) -> Result<()> {
        let index = self.sequence.len();
        if let Some((agent, a, b)) = self.current.first_conflict(self.graph) {
            return Err(Error::Internal(format!(
                "{tag} step {index}: agent {agent} holds conflicting chores {a} and {b}"
            )));
        }
        if let Some((c, a)) = maximality_gap(&self.current, self.graph) {
            return Err(Error::Internal(format!(
                "{tag} step {index}: not maximal, chore {c} still fits agent {a}"
            )));
        }
        if let Some(prev) = self.sequence.steps.last() {
            if !bundles_adjacent(prev, &self.current) {
                return Err(Error::Internal(format!(
                    "{tag} step {index}: not adjacent to the previous step"
                )));
            }
        }
        self.sequence.steps.push(self.current.clone());
        self.sequence.tags.push(tag);
        Ok(())
    }
}

/// Phases 1 and 2: the classification and the sequence up to the schedule
/// in which every unassigned chore is supported.
#[derive(Clone, Debug)]
pub struct Phase2Outcome {
    pub classification: ChoreClassification,
    pub sequence: ScheduleSequence,
}

impl Phase2Outcome {
    pub fn schedule(&self) -> &Schedule {
        self.sequence.last()
    }
}

pub fn phase2(instance: &Instance) -> Result<Phase2Outcome> {
    require_two_agents(instance)?;
    let cls = classify(instance);
    let graph = instance.graph();
    let mut b = Builder {
        graph,
        current: cls.initial_schedule(),
        sequence: ScheduleSequence {
            steps: Vec::new(),
            tags: Vec::new(),
        },
    };
    b.emit(StepTag::Initial)?;
    let overlap = |a: ChoreId, c: ChoreId| graph.conflicts(a, c);
    for i in (1..cls.marked.len()).rev() {
        let bucket = &cls.buckets[i];
        let mut rounds = 0;
        loop {
            let s = &b.current;
            let unsupported: Vec<ChoreId> = bucket
                .iter()
                .copied()
                .filter(|&u| s.agent_of(u).is_none() && !is_supported(s, &cls, graph, u))
                .collect();
            let Some(&u_star) = unsupported.last() else {
                break;
            };
            rounds += 1;
            if rounds > bucket.len() + 1 {
                return Err(Error::Internal(format!(
                    "bucket {i} still holds unsupported chore {u_star} after {} reassignments",
                    rounds - 1
                )));
            }
            let (prev, cur) = (cls.marked[i - 1], cls.marked[i]);
            let (p, q) = (b.current.agent_of(prev), b.current.agent_of(cur));
            if overlap(prev, cur) {
                b.current.set(u_star, p);
                b.current.set(prev, None);
                b.emit(StepTag::Phase2CaseI)?;
            } else if i < 2 || !overlap(cls.marked[i - 2], prev) {
                b.current.set(u_star, p);
                b.current.set(prev, q);
                b.emit(StepTag::Phase2CaseII)?;
            } else {
                let free = unsupported
                    .iter()
                    .copied()
                    .rfind(|&u| !has_later_assigned(&b.current, &cls, graph, u));
                if let Some(u_prime) = free {
                    b.current.set(u_prime, q);
                    b.current.set(cur, p);
                    b.emit(StepTag::Phase2CaseIIIa)?;
                } else {
                    b.current.set(cur, p);
                    b.emit(StepTag::Phase2CaseIIIb)?;
                    let before = cls.marked[i - 2];
                    let s = &b.current;
                    // The move assumes the chore meets no assigned chore
                    // besides these three. A longer chore that reaches
                    // further back stays supported by those earlier chores
                    // and is left alone.
                    let only_these = |u: ChoreId| {
                        graph
                            .neighbors(u)
                            .iter()
                            .all(|&n| n == before || n == prev || n == cur || s.agent_of(n).is_none())
                    };
                    let follow_up = bucket.iter().copied().rfind(|&u| {
                        s.agent_of(u).is_none()
                            && overlap(u, before)
                            && overlap(u, prev)
                            && overlap(u, cur)
                            && !has_later_assigned(s, &cls, graph, u)
                            && only_these(u)
                    });
                    if let Some(u_prime) = follow_up {
                        let pp = b.current.agent_of(before);
                        b.current.set(u_prime, pp);
                        b.current.set(before, None);
                        b.emit(StepTag::Phase2CaseIIIc)?;
                    }
                }
            }
        }
    }
    Ok(Phase2Outcome {
        classification: cls,
        sequence: b.sequence,
    })
}

/// A breach of the properties Phase 3 relies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PostconditionViolation {
    /// An unassigned chore that is not supported.
    Unsupported { chore: ChoreId },
    /// An untargeted assigned chore overlapping a later-finishing chore of
    /// its target colour other than the next untargeted chore.
    StrayOverlap { chore: ChoreId, other: ChoreId },
}

impl fmt::Display for PostconditionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PostconditionViolation::Unsupported { chore } => write!(f, "chore {chore} is unassigned and unsupported"),
            PostconditionViolation::StrayOverlap { chore, other } => write!(
                f,
                "untargeted chore {chore} overlaps chore {other} of its target colour, which is not the next untargeted chore"
            ),
        }
    }
}

fn untargeted(s: &Schedule, cls: &ChoreClassification) -> Vec<ChoreId> {
    cls.finish_order
        .iter()
        .copied()
        .filter(|&c| s.agent_of(c) != cls.target(c))
        .collect()
}

/// Checks the schedule left by Phase 2: every unassigned chore is
/// supported, and every untargeted assigned chore with a target colour
/// overlaps, among later-finishing chores in that colour, at most the next
/// untargeted chore.
pub fn phase2_postconditions(
    schedule: &Schedule,
    classification: &ChoreClassification,
    graph: &ConflictGraph,
) -> Vec<PostconditionViolation> {
    let cls = classification;
    let mut out: Vec<PostconditionViolation> = schedule
        .unassigned()
        .filter(|&c| !is_supported(schedule, cls, graph, c))
        .map(|chore| PostconditionViolation::Unsupported { chore })
        .collect();
    let pending = untargeted(schedule, cls);
    for (idx, &c) in pending.iter().enumerate() {
        let (Some(_), Some(target)) = (schedule.agent_of(c), cls.target(c)) else {
            continue;
        };
        let next = pending.get(idx + 1).copied();
        for &other in graph.neighbors(c) {
            if cls.rank[other] > cls.rank[c] && schedule.agent_of(other) == Some(target) && Some(other) != next {
                out.push(PostconditionViolation::StrayOverlap { chore: c, other });
            }
        }
    }
    out
}

/// The full three-phase sequence. Every step is feasible and maximal,
/// consecutive steps are adjacent, and the last step swaps the first.
pub fn interval_sequence_ef1(instance: &Instance) -> Result<ScheduleSequence> {
    let Phase2Outcome {
        classification: cls,
        sequence,
    } = phase2(instance)?;
    let graph = instance.graph();
    let mut b = Builder {
        graph,
        current: sequence.last().clone(),
        sequence,
    };
    let limit = 2 * instance.chore_count() + 1;
    for _ in 0..=limit {
        let pending = untargeted(&b.current, &cls);
        let Some(&c) = pending.first() else {
            if b.current != b.sequence.first().swapped(0, 1) {
                return Err(Error::Internal("phase 3 ended away from the swapped schedule".into()));
            }
            return Ok(b.sequence);
        };
        let before = b.current.clone();
        b.current.set(c, cls.target(c));
        if let Some(&d) = pending.get(1) {
            move_follower(&mut b.current, &before, d, cls.target(d), graph);
        }
        b.emit(StepTag::Phase3)?;
    }
    Err(Error::Internal("phase 3 did not terminate".into()))
}

/// Moves the follower `d` only if it must: when it now conflicts with its
/// bundle, or when it is unassigned but fits somewhere. Prefers its target
/// colour, then the other colour, then leaving it out, among placements
/// that keep the step adjacent; prefers a placement that also leaves the
/// schedule maximal.
fn move_follower(s: &mut Schedule, before: &Schedule, d: ChoreId, target: Option<AgentId>, graph: &ConflictGraph) {
    let must_move = match s.agent_of(d) {
        Some(a) => !s.fits(d, a, graph),
        None => (0..2).any(|a| s.fits(d, a, graph)),
    };
    if !must_move {
        return;
    }
    let mut options: Vec<Option<AgentId>> = Vec::with_capacity(3);
    if let Some(t) = target {
        options.push(Some(t));
        options.push(Some(1 - t));
    } else {
        options.extend([Some(0), Some(1)]);
    }
    options.push(None);
    let current = s.agent_of(d);
    let viable: Vec<Schedule> = options
        .into_iter()
        .filter(|&o| o != current)
        .filter(|&o| o.is_none_or(|a| s.fits(d, a, graph)))
        .map(|o| {
            let mut t = s.clone();
            t.set(d, o);
            t
        })
        .filter(|t| bundles_adjacent(before, t))
        .collect();
    let chosen = viable
        .iter()
        .find(|t| maximality_gap(t, graph).is_none())
        .or(viable.first());
    if let Some(t) = chosen {
        *s = t.clone();
    }
}
