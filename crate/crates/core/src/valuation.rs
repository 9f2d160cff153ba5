//! Agent valuations over bundles of chores.
//!
//! Values are exact non-positive integers. The additive table is the common
//! case; arbitrary monotone valuations plug in through [`BundleValuation`].

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::{AgentId, ChoreId};

/// A monotone set function per agent: removing chores never lowers the value,
/// and the empty bundle is worth zero.
pub trait BundleValuation: Send + Sync {
    fn value(&self, agent: AgentId, bundle: &[ChoreId]) -> i64;
}

impl<F> BundleValuation for F
where
    F: Fn(AgentId, &[ChoreId]) -> i64 + Send + Sync,
{
    fn value(&self, agent: AgentId, bundle: &[ChoreId]) -> i64 {
        self(agent, bundle)
    }
}

#[derive(Clone)]
pub enum Valuations {
    /// `table[agent][chore]`, every entry `<= 0`.
    Additive(Vec<Vec<i64>>),
    Oracle(Arc<dyn BundleValuation>),
}

impl fmt::Debug for Valuations {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuations::Additive(rows) => f.debug_tuple("Additive").field(rows).finish(),
            Valuations::Oracle(_) => f.write_str("Oracle(..)"),
        }
    }
}

/// The two values of a dichotomous profile, `heavy < light <= 0`.
///
/// With `allow_uniform`, a single-valued profile is reported with
/// `heavy == light`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Dichotomy {
    pub heavy: i64,
    pub light: i64,
}

impl Dichotomy {
    pub fn is_heavy(&self, value: i64) -> bool {
        value == self.heavy
    }
}

impl Valuations {
    pub fn oracle(f: impl BundleValuation + 'static) -> Self {
        Valuations::Oracle(Arc::new(f))
    }

    pub fn value(&self, agent: AgentId, bundle: &[ChoreId]) -> i64 {
        match self {
            Valuations::Additive(rows) => bundle.iter().map(|&c| rows[agent][c]).sum(),
            Valuations::Oracle(f) => {
                if bundle.is_empty() {
                    0
                } else {
                    f.value(agent, bundle)
                }
            }
        }
    }

    pub fn additive(&self) -> Option<&[Vec<i64>]> {
        match self {
            Valuations::Additive(rows) => Some(rows),
            Valuations::Oracle(_) => None,
        }
    }

    pub(crate) fn validate(&self, agents: usize, chores: usize) -> Result<()> {
        let Valuations::Additive(rows) = self else {
            return Ok(());
        };
        if rows.len() != agents {
            return Err(Error::InvalidInstance(format!(
                "valuation table has {} rows for {} agents",
                rows.len(),
                agents
            )));
        }
        for (row, values) in rows.iter().enumerate() {
            if values.len() != chores {
                return Err(Error::RaggedMatrix {
                    row,
                    expected: chores,
                    found: values.len(),
                });
            }
            if let Some(col) = values.iter().position(|&v| v > 0) {
                return Err(Error::InvalidInstance(format!(
                    "agent {row} values chore {col} at {}, chores must be non-positive",
                    values[col]
                )));
            }
        }
        Ok(())
    }

    /// True when every agent has the same additive row. Oracles are never
    /// reported identical since that cannot be decided from samples.
    pub fn is_identical(&self) -> bool {
        match self {
            Valuations::Additive(rows) => rows.windows(2).all(|w| w[0] == w[1]),
            Valuations::Oracle(_) => false,
        }
    }

    /// Detects an identical dichotomous additive profile.
    pub fn dichotomy(&self, allow_uniform: bool) -> Option<Dichotomy> {
        let rows = self.additive()?;
        if !self.is_identical() {
            return None;
        }
        let mut distinct: Vec<i64> = rows.first().cloned().unwrap_or_default();
        distinct.sort_unstable();
        distinct.dedup();
        match distinct.as_slice() {
            [heavy, light] => Some(Dichotomy {
                heavy: *heavy,
                light: *light,
            }),
            [only] if allow_uniform => Some(Dichotomy {
                heavy: *only,
                light: *only,
            }),
            [] if allow_uniform => Some(Dichotomy { heavy: -1, light: -1 }),
            _ => None,
        }
    }

    /// Samples random nested pairs `S ⊆ S'` and checks `v(S) >= v(S')` and
    /// `v(∅) == 0`. Returns the first counterexample found as
    /// `(agent, smaller, larger)`.
    pub fn sample_monotonicity<R: Rng>(
        &self,
        agents: usize,
        chores: usize,
        samples: usize,
        rng: &mut R,
    ) -> Option<(AgentId, Vec<ChoreId>, Vec<ChoreId>)> {
        for agent in 0..agents {
            if self.value(agent, &[]) != 0 {
                return Some((agent, Vec::new(), Vec::new()));
            }
        }
        if agents == 0 {
            return None;
        }
        for _ in 0..samples {
            let agent = rng.gen_range(0..agents);
            let larger: Vec<ChoreId> = (0..chores).filter(|_| rng.gen_bool(0.5)).collect();
            let smaller: Vec<ChoreId> = larger.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
            if self.value(agent, &smaller) < self.value(agent, &larger) {
                return Some((agent, smaller, larger));
            }
        }
        None
    }
}
