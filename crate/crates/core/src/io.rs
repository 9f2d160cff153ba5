//! JSON formats for instances, schedules, and existence answers.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::instance::{path_instance, Chore, Instance};
use crate::schedule::Schedule;
use crate::valuation::Valuations;
use crate::{AgentId, ChoreId};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    agents: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    chores: Option<Vec<Chore>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    path: Option<usize>,
    valuations: Vec<Vec<i64>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScheduleFile {
    assignment: BTreeMap<ChoreId, Option<AgentId>>,
}

fn json_error(what: &str, e: serde_json::Error) -> Error {
    Error::InvalidInstance(format!("{what}: {e}"))
}

/// Reads `{"agents", "chores", "valuations"}`, or `{"agents", "path": m,
/// "valuations"}` for a path of `m` chores.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| json_error("instance", e))?;
    if file.valuations.len() != file.agents {
        return Err(Error::InvalidInstance(format!(
            "field `valuations` has {} rows for {} agents",
            file.valuations.len(),
            file.agents
        )));
    }
    match (file.chores, file.path) {
        (Some(chores), None) => Instance::new(file.agents, chores, Valuations::Additive(file.valuations)),
        (None, Some(m)) => {
            if let Some((row, r)) = file.valuations.iter().enumerate().find(|(_, r)| r.len() != m) {
                return Err(Error::RaggedMatrix {
                    row,
                    expected: m,
                    found: r.len(),
                });
            }
            if file.agents == 0 {
                return Err(Error::InvalidInstance("at least one agent is required".into()));
            }
            path_instance(file.valuations)
        }
        (Some(_), Some(_)) => Err(Error::InvalidInstance(
            "give either `chores` or `path`, not both".into(),
        )),
        (None, None) => Err(Error::InvalidInstance("missing field `chores` (or `path`)".into())),
    }
}

/// Writes an additive instance with its chores listed explicitly.
pub fn instance_to_json(instance: &Instance) -> Result<String> {
    let rows = instance.valuations().additive().ok_or(Error::NotAdditive)?;
    let file = InstanceFile {
        agents: instance.agents(),
        chores: Some(instance.chores().to_vec()),
        path: None,
        valuations: rows.to_vec(),
    };
    Ok(serde_json::to_string_pretty(&file).expect("instance serializes"))
}

/// Reads `{"assignment": {"0": 1, "1": null}}`. Chores not listed are
/// unassigned.
pub fn parse_schedule(text: &str, instance: &Instance) -> Result<Schedule> {
    let file: ScheduleFile = serde_json::from_str(text).map_err(|e| json_error("schedule", e))?;
    let mut assignment = vec![None; instance.chore_count()];
    for (chore, agent) in file.assignment {
        if chore >= assignment.len() {
            return Err(Error::UnknownChore(chore));
        }
        assignment[chore] = agent;
    }
    Schedule::from_assignment(instance.agents(), assignment)
}

/// `{"assignment": {...}}` with every chore listed, `null` when unassigned.
pub fn schedule_to_value(schedule: &Schedule) -> Value {
    let assignment: BTreeMap<ChoreId, Option<AgentId>> = schedule.assignment().iter().copied().enumerate().collect();
    serde_json::to_value(ScheduleFile { assignment }).expect("schedule serializes")
}

pub fn schedule_to_json(schedule: &Schedule) -> String {
    serde_json::to_string_pretty(&schedule_to_value(schedule)).expect("schedule serializes")
}

/// `{"exists": bool, "witness": schedule | null}`.
pub fn exists_to_value(witness: Option<&Schedule>) -> Value {
    json!({
        "exists": witness.is_some(),
        "witness": witness.map(schedule_to_value),
    })
}
