//! Seeded random instance generators.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instance::{path_instance, Chore, Instance};
use crate::valuation::Valuations;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    /// Random intervals on a short horizon.
    RandomIntervals,
    /// A path `c_0 - ... - c_{m-1}`.
    RandomPath,
    /// A path with identical values drawn from two levels.
    RandomDichotomousPath,
    /// Connected interval clusters of at most `component_size` chores each,
    /// identical values.
    BoundedComponents,
}

impl GeneratorKind {
    pub const ALL: [GeneratorKind; 4] = [
        GeneratorKind::RandomIntervals,
        GeneratorKind::RandomPath,
        GeneratorKind::RandomDichotomousPath,
        GeneratorKind::BoundedComponents,
    ];
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GeneratorKind::RandomIntervals => "random-intervals",
            GeneratorKind::RandomPath => "random-path",
            GeneratorKind::RandomDichotomousPath => "random-dichotomous-path",
            GeneratorKind::BoundedComponents => "bounded-components",
        })
    }
}

impl FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GeneratorKind::ALL
            .into_iter()
            .find(|k| k.to_string() == s)
            .ok_or_else(|| Error::InvalidParameters(format!("unknown generator kind `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorParams {
    pub agents: usize,
    pub chores: usize,
    /// Values are drawn from `min_value..=max_value`.
    pub min_value: i64,
    pub max_value: i64,
    /// Give every agent the same row.
    pub identical: bool,
    /// Longest interval for `random-intervals`.
    pub max_length: u64,
    /// Largest cluster for `bounded-components`; defaults to `agents`.
    pub component_size: Option<usize>,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        GeneratorParams {
            agents: 2,
            chores: 8,
            min_value: -10,
            max_value: 0,
            identical: false,
            max_length: 6,
            component_size: None,
        }
    }
}

impl GeneratorParams {
    fn validate(&self) -> Result<()> {
        if self.agents == 0 {
            return Err(Error::InvalidParameters("at least one agent is required".into()));
        }
        if self.min_value > self.max_value || self.max_value > 0 {
            return Err(Error::InvalidParameters(format!(
                "value range {}..={} must be non-empty and non-positive",
                self.min_value, self.max_value
            )));
        }
        if self.max_length == 0 {
            return Err(Error::InvalidParameters("max_length must be positive".into()));
        }
        Ok(())
    }
}

fn value_rows<R: Rng>(rng: &mut R, p: &GeneratorParams) -> Vec<Vec<i64>> {
    let draw = |rng: &mut R| {
        (0..p.chores)
            .map(|_| rng.gen_range(p.min_value..=p.max_value))
            .collect::<Vec<_>>()
    };
    if p.identical {
        vec![draw(rng); p.agents]
    } else {
        (0..p.agents).map(|_| draw(rng)).collect()
    }
}

/// Builds an instance of the given kind; the same seed always gives the
/// same instance.
pub fn generate(kind: GeneratorKind, params: &GeneratorParams, seed: u64) -> Result<Instance> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    generate_with(kind, params, &mut rng)
}

/// As [`generate`], drawing from a caller-owned generator.
pub fn generate_with<R: Rng>(kind: GeneratorKind, p: &GeneratorParams, rng: &mut R) -> Result<Instance> {
    p.validate()?;
    let m = p.chores;
    match kind {
        GeneratorKind::RandomIntervals => {
            let horizon = 2 * m as u64 + 2;
            let chores = (0..m)
                .map(|id| {
                    let start = rng.gen_range(0..horizon);
                    Chore::new(id, start, start + rng.gen_range(1..=p.max_length))
                })
                .collect();
            let rows = value_rows(rng, p);
            Instance::new(p.agents, chores, Valuations::Additive(rows))
        }
        GeneratorKind::RandomPath => {
            let rows = value_rows(rng, p);
            path_instance(rows)
        }
        GeneratorKind::RandomDichotomousPath => {
            if m < 2 {
                return Err(Error::InvalidParameters(
                    "a dichotomous path needs at least two chores to use both values".into(),
                ));
            }
            if p.min_value == p.max_value {
                return Err(Error::InvalidParameters(
                    "a dichotomous profile needs two distinct values".into(),
                ));
            }
            let heavy = rng.gen_range(p.min_value..p.max_value);
            let light = rng.gen_range(heavy + 1..=p.max_value);
            let mut row: Vec<i64> = (0..m).map(|_| if rng.gen_bool(0.5) { heavy } else { light }).collect();
            if !row.contains(&heavy) || !row.contains(&light) {
                let mut positions: Vec<usize> = (0..m).collect();
                positions.shuffle(rng);
                row[positions[0]] = heavy;
                row[positions[1]] = light;
            }
            path_instance(vec![row; p.agents])
        }
        GeneratorKind::BoundedComponents => {
            let limit = p.component_size.unwrap_or(p.agents);
            if limit == 0 || limit > p.agents {
                return Err(Error::InvalidParameters(format!(
                    "component size {limit} must be between 1 and the agent count {}",
                    p.agents
                )));
            }
            let mut chores = Vec::with_capacity(m);
            let mut base = 0u64;
            while chores.len() < m {
                let size = rng.gen_range(1..=limit).min(m - chores.len());
                // Each new interval starts inside the union so far, which
                // keeps the cluster connected.
                let mut end = base;
                for j in 0..size {
                    let start = if j == 0 { base } else { rng.gen_range(base..end) };
                    let finish = start + rng.gen_range(1..=p.max_length);
                    end = end.max(finish);
                    chores.push(Chore::new(chores.len(), start, finish));
                }
                base = end + 1;
            }
            let rows = value_rows(
                rng,
                &GeneratorParams {
                    identical: true,
                    ..p.clone()
                },
            );
            Instance::new(p.agents, chores, Valuations::Additive(rows))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let p = GeneratorParams {
            chores: 6,
            ..Default::default()
        };
        for kind in GeneratorKind::ALL {
            let a = generate(kind, &p, 7).unwrap();
            let b = generate(kind, &p, 7).unwrap();
            assert_eq!(a.chores(), b.chores());
            assert_eq!(a.valuations().additive(), b.valuations().additive());
        }
    }

    #[test]
    fn structural_properties() {
        for seed in 0..50 {
            let d = generate(
                GeneratorKind::RandomDichotomousPath,
                &GeneratorParams {
                    agents: 5,
                    chores: 9,
                    ..Default::default()
                },
                seed,
            )
            .unwrap();
            assert!(d.valuations().dichotomy(false).is_some());
            assert!(d.graph().is_path());
            let b = generate(
                GeneratorKind::BoundedComponents,
                &GeneratorParams {
                    agents: 3,
                    chores: 12,
                    ..Default::default()
                },
                seed,
            )
            .unwrap();
            assert!(b.graph().components().iter().all(|c| c.len() <= 3));
            assert!(b.valuations().is_identical());
        }
    }

    #[test]
    fn rejects_oversized_components() {
        let p = GeneratorParams {
            agents: 2,
            component_size: Some(3),
            ..Default::default()
        };
        assert!(generate(GeneratorKind::BoundedComponents, &p, 1).is_err());
        assert!("bogus".parse::<GeneratorKind>().is_err());
        assert_eq!(
            "random-path".parse::<GeneratorKind>().unwrap(),
            GeneratorKind::RandomPath
        );
    }
}
