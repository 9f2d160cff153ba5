//! Weighted round robin for identical dichotomous valuations on a path.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{path_order, Instance};
use crate::schedule::Schedule;
use crate::valuation::Dichotomy;
use crate::{AgentId, ChoreId};

use super::split::{pair_splits, triple_splits, Piece, Split};

/// A group of two (or, for odd `n`, one group of three) agents that picks
/// as a single agent during round robin.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MetaAgent {
    pub index: usize,
    pub members: Vec<AgentId>,
    /// Real chores in the order they were picked.
    pub picks: Vec<ChoreId>,
    pub dummy_heavy: usize,
    pub dummy_light: usize,
}

/// Where one real or padding chore ended up before padding was stripped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PaddedAssignment {
    pub piece: Piece,
    pub agent: AgentId,
}

#[derive(Clone, Debug)]
pub struct DichotomousRun {
    pub schedule: Schedule,
    pub dichotomy: Dichotomy,
    pub meta_agents: Vec<MetaAgent>,
    /// Picking sequence as meta-agent indices.
    pub picking_sequence: Vec<usize>,
    /// Every chore, real and padding, with its owner.
    pub padded: Vec<PaddedAssignment>,
}

impl DichotomousRun {
    /// Per-agent `(heavy, light)` counts including padding.
    pub fn padded_counts(&self) -> Vec<(usize, usize)> {
        let mut counts = vec![(0, 0); self.schedule.agents()];
        for p in &self.padded {
            if p.piece.heavy {
                counts[p.agent].0 += 1;
            } else {
                counts[p.agent].1 += 1;
            }
        }
        counts
    }

    /// Per-agent `(heavy, light)` counts of the final schedule.
    pub fn counts(&self) -> Vec<(usize, usize)> {
        let mut counts = vec![(0, 0); self.schedule.agents()];
        for p in self.padded.iter().filter(|p| !p.piece.dummy) {
            if p.piece.heavy {
                counts[p.agent].0 += 1;
            } else {
                counts[p.agent].1 += 1;
            }
        }
        counts
    }
}

/// Pairs `{0,1}, {2,3}, ...`; for odd `n` the first group is `{0,1,2}`.
pub fn meta_agents(n: usize) -> Vec<Vec<AgentId>> {
    if n.is_multiple_of(2) {
        (0..n / 2).map(|j| vec![2 * j, 2 * j + 1]).collect()
    } else {
        let mut groups = vec![vec![0, 1, 2]];
        groups.extend((1..(n - 1) / 2).map(|j| vec![2 * j + 1, 2 * j + 2]));
        groups
    }
}

/// `⟨S_1..S_p, S_1..S_p⟩`, with a trailing `S_1` when the first group is
/// the triple.
pub fn picking_sequence(groups: &[Vec<AgentId>]) -> Vec<usize> {
    let p = groups.len();
    let mut seq: Vec<usize> = (0..p).chain(0..p).collect();
    if groups.first().is_some_and(|g| g.len() == 3) {
        seq.push(0);
    }
    seq
}

/// Weighted round robin over meta agents: complete and EF1 for `n >= 4` agents with identical
/// dichotomous additive valuations on a path.
pub fn solve_identical_dichotomous_path(instance: &Instance) -> Result<Schedule> {
    run_identical_dichotomous_path(instance, false).map(|run| run.schedule)
}

/// Full run including the meta agents and padded assignment. With
/// `allow_uniform`, a profile using a single value is accepted and every
/// chore counts as heavy.
///
/// Disjoint unions of paths are accepted as well; they are walked in
/// component order as one long path.
pub fn run_identical_dichotomous_path(instance: &Instance, allow_uniform: bool) -> Result<DichotomousRun> {
    let n = instance.agents();
    if n < 4 {
        return Err(Error::TooFewAgents { min: 4, found: n });
    }
    let order = path_order(instance).ok_or(Error::NotPath)?;
    let valuations = instance.valuations();
    let rows = valuations.additive().ok_or(Error::NotAdditive)?;
    if !valuations.is_identical() {
        return Err(Error::NotIdentical);
    }
    let dichotomy = valuations.dichotomy(allow_uniform).ok_or(Error::NotDichotomous)?;
    let heavy_of = |c: ChoreId| dichotomy.is_heavy(rows[0][c]);

    let groups = meta_agents(n);
    let seq = picking_sequence(&groups);
    let mut metas: Vec<MetaAgent> = groups
        .iter()
        .enumerate()
        .map(|(index, members)| MetaAgent {
            index,
            members: members.clone(),
            picks: Vec::new(),
            dummy_heavy: 0,
            dummy_light: 0,
        })
        .collect();

    // Every pick takes the leftmost remaining chore of the current type, so
    // picks follow the path order.
    let heavy: Vec<ChoreId> = order.iter().copied().filter(|&c| heavy_of(c)).collect();
    let light: Vec<ChoreId> = order.iter().copied().filter(|&c| !heavy_of(c)).collect();
    let mut pos = 0;
    let mut heavy_count = vec![0usize; metas.len()];
    for &c in &heavy {
        let m = seq[pos % seq.len()];
        metas[m].picks.push(c);
        heavy_count[m] += 1;
        pos += 1;
    }
    let mut light_count = vec![0usize; metas.len()];
    for &c in &light {
        let m = seq[pos % seq.len()];
        metas[m].picks.push(c);
        light_count[m] += 1;
        pos += 1;
    }

    // Pad the last partial round of each phase. Any window of `seq.len()`
    // consecutive positions visits each meta agent as often as it occurs
    // in the sequence.
    let multiplicity = |m: usize| seq.iter().filter(|&&x| x == m).count();
    let rounds = |total: usize| total.div_ceil(seq.len());
    let (heavy_rounds, light_rounds) = (rounds(heavy.len()), rounds(light.len()));
    let m_real = instance.chore_count();
    let mut next_dummy = m_real;
    let mut pieces_of: Vec<Vec<Piece>> = vec![Vec::new(); metas.len()];
    for meta in metas.iter_mut() {
        let mult = multiplicity(meta.index);
        meta.dummy_heavy = heavy_rounds * mult - heavy_count[meta.index];
        meta.dummy_light = light_rounds * mult - light_count[meta.index];
        let pieces = &mut pieces_of[meta.index];
        pieces.extend(meta.picks.iter().map(|&c| Piece {
            id: c,
            heavy: heavy_of(c),
            dummy: false,
        }));
        for heavy in std::iter::repeat_n(true, meta.dummy_heavy).chain(std::iter::repeat_n(false, meta.dummy_light)) {
            pieces.push(Piece {
                id: next_dummy,
                heavy,
                dummy: true,
            });
            next_dummy += 1;
        }
    }

    let graph = instance.graph();
    let options: Vec<Vec<Split>> = metas
        .iter()
        .map(|meta| {
            let pieces = &pieces_of[meta.index];
            match meta.members.len() {
                2 => pair_splits(pieces, graph),
                3 => triple_splits(pieces, graph),
                k => Err(Error::Internal(format!("meta agent with {k} members"))),
            }
        })
        .collect::<Result<_>>()?;
    let chosen = choose_splits(&options);

    let mut padded = Vec::with_capacity(next_dummy);
    let mut schedule = Schedule::empty(n, m_real);
    for (meta, split) in metas.iter().zip(chosen) {
        let pieces = &pieces_of[meta.index];
        for (&agent, ids) in meta.members.iter().zip(&split.bundles) {
            for &id in ids {
                let piece = *pieces.iter().find(|p| p.id == id).expect("split returns picked ids");
                padded.push(PaddedAssignment { piece, agent });
                if !piece.dummy {
                    schedule.set(id, Some(agent));
                }
            }
        }
    }
    padded.sort_by_key(|p| p.piece.id);
    if let Some((agent, a, b)) = schedule.first_conflict(graph) {
        return Err(Error::Internal(format!(
            "agent {agent} received conflicting chores {a} and {b}"
        )));
    }
    if !schedule.is_complete() {
        return Err(Error::Internal("weighted round robin left a chore unassigned".into()));
    }
    Ok(DichotomousRun {
        schedule,
        dichotomy,
        meta_agents: metas,
        picking_sequence: seq,
        padded,
    })
}

/// Picks one split per meta agent. Once padding is stripped, an agent
/// holding more padding than another is that much better off, so the
/// choice keeps every agent at no more than one padding chore of each type
/// and all padding totals within one of each other. When no common layout
/// exists each meta agent falls back to its own best split.
fn choose_splits(options: &[Vec<Split>]) -> Vec<&Split> {
    let fits = |split: &Split, low: usize| {
        split.dummies.iter().all(|&(h, l)| h <= 1 && l <= 1)
            && split.dummy_totals().iter().all(|&t| t == low || t == low + 1)
    };
    for low in 0..=1 {
        let picks: Option<Vec<&Split>> = options.iter().map(|opts| opts.iter().find(|s| fits(s, low))).collect();
        if let Some(picks) = picks {
            return picks;
        }
    }
    options.iter().map(|opts| &opts[0]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checkers::check_ef1;
    use crate::instance::path_instance;

    #[test]
    fn grouping_and_sequence() {
        assert_eq!(meta_agents(4), vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(meta_agents(5), vec![vec![0, 1, 2], vec![3, 4]]);
        assert_eq!(picking_sequence(&meta_agents(4)), vec![0, 1, 0, 1]);
        assert_eq!(picking_sequence(&meta_agents(7)), vec![0, 1, 2, 0, 1, 2, 0]);
    }

    #[test]
    fn all_heavy_path_of_eight() {
        let inst = path_instance(vec![vec![-5; 8]; 4]).unwrap();
        assert_eq!(
            solve_identical_dichotomous_path(&inst).unwrap_err(),
            Error::NotDichotomous
        );
        let run = run_identical_dichotomous_path(&inst, true).unwrap();
        assert!(run.schedule.is_complete());
        assert!(run.schedule.bundles().iter().all(|b| b.len() == 2));
    }

    #[test]
    fn empty_path() {
        let inst = path_instance(vec![vec![]; 4]).unwrap();
        let run = run_identical_dichotomous_path(&inst, true).unwrap();
        assert_eq!(run.schedule.chore_count(), 0);
    }

    #[test]
    fn mixed_path_is_balanced_and_ef1() {
        let row = vec![-3, -1, -1, -3, -3, -1, -3, -1, -1, -1, -3];
        for n in 4..=7 {
            let inst = path_instance(vec![row.clone(); n]).unwrap();
            let run = run_identical_dichotomous_path(&inst, false).unwrap();
            let padded = run.padded_counts();
            assert!(padded.windows(2).all(|w| w[0] == w[1]), "n={n}: {padded:?}");
            let counts = run.counts();
            for t in 0..2 {
                let pick = |c: &(usize, usize)| if t == 0 { c.0 } else { c.1 };
                let max = counts.iter().map(pick).max().unwrap();
                let min = counts.iter().map(pick).min().unwrap();
                assert!(max - min <= 1);
            }
            assert!(check_ef1(&run.schedule, &inst).unwrap().holds);
        }
    }

    #[test]
    fn rejections() {
        let three = path_instance(vec![vec![-1, -2]; 3]).unwrap();
        assert!(matches!(
            solve_identical_dichotomous_path(&three),
            Err(Error::TooFewAgents { .. })
        ));
        let mut rows = vec![vec![-1, -2]; 4];
        rows[3] = vec![-2, -1];
        let differing = path_instance(rows).unwrap();
        assert_eq!(
            solve_identical_dichotomous_path(&differing).unwrap_err(),
            Error::NotIdentical
        );
        let three_values = path_instance(vec![vec![-1, -2, -3]; 4]).unwrap();
        assert_eq!(
            solve_identical_dichotomous_path(&three_values).unwrap_err(),
            Error::NotDichotomous
        );
        let star = crate::golden::star();
        let star4 = Instance::new(
            4,
            star.chores().to_vec(),
            crate::valuation::Valuations::Additive(vec![vec![-1, -2, -1, -2]; 4]),
        )
        .unwrap();
        assert_eq!(solve_identical_dichotomous_path(&star4).unwrap_err(), Error::NotPath);
    }
}
