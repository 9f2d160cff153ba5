//! Fairness and efficiency predicates over feasible schedules.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::ConflictGraph;
use crate::instance::Instance;
use crate::oracle::{self, DEFAULT_GUARD};
use crate::schedule::{require_feasible, Schedule};
use crate::valuation::Valuations;
use crate::{AgentId, ChoreId};

/// Agent `envious` still envies `envied` after every allowed removal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub envious: AgentId,
    pub envied: AgentId,
    /// Fewest chores the envious agent must drop from its own bundle to
    /// stop envying.
    pub removals_needed: usize,
}

/// A removal set that cures the envy of `envious` towards `envied`. Empty
/// when there was no envy to begin with.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub envious: AgentId,
    pub envied: AgentId,
    pub removed: Vec<ChoreId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FairnessVerdict {
    pub holds: bool,
    pub violations: Vec<Violation>,
    pub witnesses: Vec<Witness>,
}

impl FairnessVerdict {
    fn from_parts(violations: Vec<Violation>, witnesses: Vec<Witness>) -> Self {
        FairnessVerdict {
            holds: violations.is_empty(),
            violations,
            witnesses,
        }
    }

    /// Whether the ordered pair is listed as a violation.
    pub fn violates(&self, envious: AgentId, envied: AgentId) -> bool {
        self.violations
            .iter()
            .any(|v| v.envious == envious && v.envied == envied)
    }
}

struct Pair<'a> {
    envious: AgentId,
    envied: AgentId,
    own: &'a [ChoreId],
    own_value: i64,
    other_value: i64,
}

fn pairs<'a>(schedule: &Schedule, instance: &Instance, bundles: &'a [Vec<ChoreId>]) -> Vec<Pair<'a>> {
    let n = schedule.agents();
    let mut out = Vec::with_capacity(n * n.saturating_sub(1));
    for i in 0..n {
        let own_value = instance.value(i, &bundles[i]);
        for k in (0..n).filter(|&k| k != i) {
            out.push(Pair {
                envious: i,
                envied: k,
                own: &bundles[i],
                own_value,
                other_value: instance.value(i, &bundles[k]),
            });
        }
    }
    out
}

fn prepare(schedule: &Schedule, instance: &Instance) -> Result<Vec<Vec<ChoreId>>> {
    if schedule.agents() != instance.agents() {
        return Err(Error::AgentCount {
            expected: instance.agents(),
            found: schedule.agents(),
        });
    }
    require_feasible(schedule, instance.graph())?;
    Ok(schedule.bundles())
}

fn without(bundle: &[ChoreId], removed: &[ChoreId]) -> Vec<ChoreId> {
    bundle.iter().copied().filter(|c| !removed.contains(c)).collect()
}

/// Fewest removals from `pair.own` that cure the envy. Monotonicity makes
/// the answer at most `|own|`.
fn removals_needed(valuations: &Valuations, pair: &Pair<'_>) -> usize {
    if pair.own_value >= pair.other_value {
        return 0;
    }
    if let Some(rows) = valuations.additive() {
        let mut values: Vec<i64> = pair.own.iter().map(|&c| rows[pair.envious][c]).collect();
        values.sort_unstable();
        let mut current = pair.own_value;
        for (count, v) in values.into_iter().enumerate() {
            current -= v;
            if current >= pair.other_value {
                return count + 1;
            }
        }
        return pair.own.len();
    }
    for size in 1..=pair.own.len() {
        let mut found = false;
        for_each_subset(pair.own, size, &mut |subset| {
            if !found && valuations.value(pair.envious, &without(pair.own, subset)) >= pair.other_value {
                found = true;
            }
        });
        if found {
            return size;
        }
    }
    pair.own.len()
}

fn for_each_subset(items: &[ChoreId], size: usize, f: &mut impl FnMut(&[ChoreId])) {
    fn go(items: &[ChoreId], size: usize, start: usize, current: &mut Vec<ChoreId>, f: &mut impl FnMut(&[ChoreId])) {
        if current.len() == size {
            f(current);
            return;
        }
        for idx in start..items.len() {
            if items.len() - idx < size - current.len() {
                break;
            }
            current.push(items[idx]);
            go(items, size, idx + 1, current, f);
            current.pop();
        }
    }
    go(items, size, 0, &mut Vec::with_capacity(size), f);
}

/// Best removal set of size at most `k`: maximizes the remaining value,
/// then prefers fewer chores, then the lexicographically smallest ids.
fn best_removal(valuations: &Valuations, pair: &Pair<'_>, k: usize) -> (Vec<ChoreId>, i64) {
    if let Some(rows) = valuations.additive() {
        // Dropping the k most negative chores is optimal; zero-valued
        // chores are never worth dropping.
        let mut by_value: Vec<(i64, ChoreId)> = pair
            .own
            .iter()
            .map(|&c| (rows[pair.envious][c], c))
            .filter(|&(v, _)| v < 0)
            .collect();
        by_value.sort_unstable();
        by_value.truncate(k);
        let mut removed: Vec<ChoreId> = by_value.iter().map(|&(_, c)| c).collect();
        removed.sort_unstable();
        let value = pair.own_value - by_value.iter().map(|&(v, _)| v).sum::<i64>();
        return (removed, value);
    }
    let mut best = (Vec::new(), pair.own_value);
    for size in 1..=k.min(pair.own.len()) {
        for_each_subset(pair.own, size, &mut |subset| {
            let value = valuations.value(pair.envious, &without(pair.own, subset));
            if value > best.1 {
                best = (subset.to_vec(), value);
            }
        });
    }
    best
}

/// Envy-freeness: `v_i(X_i) >= v_i(X_k)` for every ordered pair.
pub fn check_ef(schedule: &Schedule, instance: &Instance) -> Result<FairnessVerdict> {
    let bundles = prepare(schedule, instance)?;
    let mut violations = Vec::new();
    let mut witnesses = Vec::new();
    for pair in pairs(schedule, instance, &bundles) {
        if pair.own_value >= pair.other_value {
            witnesses.push(Witness {
                envious: pair.envious,
                envied: pair.envied,
                removed: Vec::new(),
            });
        } else {
            violations.push(Violation {
                envious: pair.envious,
                envied: pair.envied,
                removals_needed: removals_needed(instance.valuations(), &pair),
            });
        }
    }
    Ok(FairnessVerdict::from_parts(violations, witnesses))
}

/// Envy-freeness up to one chore, evaluated literally: every single-chore
/// removal from the envious bundle is tried.
pub fn check_ef1(schedule: &Schedule, instance: &Instance) -> Result<FairnessVerdict> {
    let bundles = prepare(schedule, instance)?;
    let valuations = instance.valuations();
    let mut violations = Vec::new();
    let mut witnesses = Vec::new();
    for pair in pairs(schedule, instance, &bundles) {
        if pair.own_value >= pair.other_value {
            witnesses.push(Witness {
                envious: pair.envious,
                envied: pair.envied,
                removed: Vec::new(),
            });
            continue;
        }
        let mut best: Option<(i64, ChoreId)> = None;
        for &c in pair.own {
            let value = valuations.value(pair.envious, &without(pair.own, &[c]));
            if best.is_none_or(|(v, _)| value > v) {
                best = Some((value, c));
            }
        }
        match best {
            Some((value, c)) if value >= pair.other_value => witnesses.push(Witness {
                envious: pair.envious,
                envied: pair.envied,
                removed: vec![c],
            }),
            _ => violations.push(Violation {
                envious: pair.envious,
                envied: pair.envied,
                removals_needed: removals_needed(valuations, &pair),
            }),
        }
    }
    Ok(FairnessVerdict::from_parts(violations, witnesses))
}

/// Envy-freeness up to any chore. Pairs whose envious bundle is empty are
/// vacuously fine.
pub fn check_efx(schedule: &Schedule, instance: &Instance) -> Result<FairnessVerdict> {
    let bundles = prepare(schedule, instance)?;
    let valuations = instance.valuations();
    let mut violations = Vec::new();
    for pair in pairs(schedule, instance, &bundles) {
        let fails = pair
            .own
            .iter()
            .any(|&c| valuations.value(pair.envious, &without(pair.own, &[c])) < pair.other_value);
        if fails {
            violations.push(Violation {
                envious: pair.envious,
                envied: pair.envied,
                removals_needed: removals_needed(valuations, &pair),
            });
        }
    }
    Ok(FairnessVerdict::from_parts(violations, Vec::new()))
}

/// Envy-freeness up to `k` chores. Additive profiles drop the `k` worst
/// chores directly; other valuations search every removal set of size at
/// most `k`.
pub fn check_efk(schedule: &Schedule, instance: &Instance, k: usize) -> Result<FairnessVerdict> {
    let bundles = prepare(schedule, instance)?;
    let valuations = instance.valuations();
    let mut violations = Vec::new();
    let mut witnesses = Vec::new();
    for pair in pairs(schedule, instance, &bundles) {
        if pair.own_value >= pair.other_value {
            witnesses.push(Witness {
                envious: pair.envious,
                envied: pair.envied,
                removed: Vec::new(),
            });
            continue;
        }
        let (removed, value) = best_removal(valuations, &pair, k);
        if value >= pair.other_value {
            witnesses.push(Witness {
                envious: pair.envious,
                envied: pair.envied,
                removed,
            });
        } else {
            violations.push(Violation {
                envious: pair.envious,
                envied: pair.envied,
                removals_needed: removals_needed(valuations, &pair),
            });
        }
    }
    Ok(FairnessVerdict::from_parts(violations, witnesses))
}

/// No unassigned chore fits into any bundle. Errors on infeasible input.
pub fn is_maximal(schedule: &Schedule, graph: &ConflictGraph) -> Result<bool> {
    require_feasible(schedule, graph)?;
    Ok(maximality_gap(schedule, graph).is_none())
}

/// An unassigned chore and an agent it could still be given to.
pub fn maximality_gap(schedule: &Schedule, graph: &ConflictGraph) -> Option<(ChoreId, AgentId)> {
    schedule.unassigned().find_map(|c| {
        (0..schedule.agents())
            .find(|&a| schedule.fits(c, a, graph))
            .map(|a| (c, a))
    })
}

pub fn is_complete(schedule: &Schedule) -> bool {
    schedule.is_complete()
}

pub fn utilities(schedule: &Schedule, instance: &Instance) -> Vec<i64> {
    schedule
        .bundles()
        .iter()
        .enumerate()
        .map(|(i, b)| instance.value(i, b))
        .collect()
}

/// `a` Pareto-dominates `b`: weakly better for all, strictly for one.
pub fn dominates(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y) && a.iter().zip(b).any(|(x, y)| x > y)
}

/// Pareto optimality relative to every maximal schedule of the instance.
/// Non-maximal schedules are never Pareto optimal.
pub fn is_pareto_optimal(schedule: &Schedule, instance: &Instance) -> Result<bool> {
    is_pareto_optimal_with_guard(schedule, instance, DEFAULT_GUARD)
}

pub fn is_pareto_optimal_with_guard(schedule: &Schedule, instance: &Instance, guard: usize) -> Result<bool> {
    if instance.chore_count() > guard {
        return Err(Error::GuardExceeded {
            chores: instance.chore_count(),
            guard,
        });
    }
    if !is_maximal(schedule, instance.graph())? {
        return Ok(false);
    }
    let own = utilities(schedule, instance);
    let mut dominated = false;
    oracle::for_each_maximal(instance, guard, |other| {
        if !dominated && dominates(&utilities(other, instance), &own) {
            dominated = true;
        }
        !dominated
    })?;
    Ok(!dominated)
}
