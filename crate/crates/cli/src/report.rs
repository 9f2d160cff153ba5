use std::fmt::Write;

use chore_sched::{FairnessVerdict, Schedule};
use serde_json::Value;

/// What a command produced: the stable JSON form, a human-readable form,
/// and whether the requested property held.
pub struct Report {
    pub json: Value,
    pub text: String,
    pub holds: bool,
}

pub fn chores_text(chores: &[usize]) -> String {
    if chores.is_empty() {
        return "-".into();
    }
    chores.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn schedule_text(schedule: &Schedule) -> String {
    let mut out = String::new();
    for (agent, bundle) in schedule.bundles().iter().enumerate() {
        writeln!(out, "agent {agent}: {}", chores_text(bundle)).unwrap();
    }
    let unassigned: Vec<usize> = schedule.unassigned().collect();
    writeln!(out, "unassigned: {}", chores_text(&unassigned)).unwrap();
    out
}

/// Assignment vector on one line, `-` for unassigned chores.
pub fn assignment_line(schedule: &Schedule) -> String {
    schedule
        .assignment()
        .iter()
        .map(|a| a.map_or("-".to_string(), |a| a.to_string()))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn verdict_text(name: &str, verdict: &FairnessVerdict) -> String {
    if verdict.holds {
        return format!("{name}: holds\n");
    }
    let mut out = format!("{name}: fails\n");
    for v in &verdict.violations {
        writeln!(
            out,
            "  agent {} envies agent {} (needs {} removals)",
            v.envious, v.envied, v.removals_needed
        )
        .unwrap();
    }
    out
}

pub fn flag_text(name: &str, value: bool) -> String {
    format!("{name}: {}\n", if value { "yes" } else { "no" })
}
