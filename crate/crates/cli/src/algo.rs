use std::fmt;

use chore_sched::instance::path_order;
use chore_sched::{Error, Instance, Result};
use clap::ValueEnum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    /// Three-phase EF1 and maximal algorithm for two agents on any interval graph.
    TwoAgentInterval,
    /// Alternating sequence for two agents on a path.
    TwoAgentPath,
    /// Weighted round robin for n >= 4 identical dichotomous agents on a path.
    DichotomousPath,
    /// Component-wise round robin for identical agents, components of at most n chores.
    BoundedComponents,
    /// Pick from the instance's structure.
    Auto,
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self
            .to_possible_value()
            .expect("no variant is skipped")
            .get_name()
            .to_owned();
        f.write_str(&name)
    }
}

/// Resolves `auto` to a concrete algorithm: two agents always use the
/// interval algorithm; identical dichotomous paths with at least four
/// agents use weighted round robin; identical profiles whose conflict
/// components fit the agent count use the component algorithm.
pub fn resolve(algo: Algo, instance: &Instance) -> Result<Algo> {
    if algo != Algo::Auto {
        return Ok(algo);
    }
    let n = instance.agents();
    let valuations = instance.valuations();
    if n == 2 {
        return Ok(Algo::TwoAgentInterval);
    }
    if n >= 4 && valuations.dichotomy(false).is_some() && path_order(instance).is_some() {
        return Ok(Algo::DichotomousPath);
    }
    let fits = instance.graph().components().iter().all(|c| c.len() <= n);
    if valuations.is_identical() && fits {
        return Ok(Algo::BoundedComponents);
    }
    Err(Error::InvalidParameters(format!(
        "no algorithm covers this instance ({n} agents, {} valuations, {}); pass --algo explicitly or use `exists`",
        if valuations.is_identical() {
            "identical"
        } else {
            "non-identical"
        },
        if fits {
            "components within the agent count"
        } else {
            "a component larger than the agent count"
        },
    )))
}
