//! Conflict-free, count-balanced splits of a meta agent's picks among its
//! two or three members.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::ConflictGraph;

/// One picked chore, real or padding. Dummy ids lie past the end of the
/// conflict graph and never conflict with anything.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Piece {
    pub id: usize,
    pub heavy: bool,
    pub dummy: bool,
}

fn adjacent(graph: &ConflictGraph, a: usize, b: usize) -> bool {
    a < graph.len() && b < graph.len() && graph.conflicts(a, b)
}

/// Components of the subgraph induced by `pieces`, as index lists into
/// `pieces`, each ordered along its path. Errors unless every component is
/// a path of at most `max_len` vertices.
fn path_components(pieces: &[Piece], graph: &ConflictGraph, max_len: usize) -> Result<Vec<Vec<usize>>> {
    let k = pieces.len();
    let nbrs: Vec<Vec<usize>> = (0..k)
        .map(|i| {
            (0..k)
                .filter(|&j| j != i && adjacent(graph, pieces[i].id, pieces[j].id))
                .collect()
        })
        .collect();
    if let Some(i) = (0..k).find(|&i| nbrs[i].len() > 2) {
        return Err(Error::Internal(format!(
            "picked chore {} has {} picked neighbours",
            pieces[i].id,
            nbrs[i].len()
        )));
    }
    let mut seen = vec![false; k];
    let mut out = Vec::new();
    let mut starts: Vec<usize> = (0..k).collect();
    starts.sort_by_key(|&i| pieces[i].id);
    for s in starts {
        if seen[s] || nbrs[s].len() == 2 {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut prev = None;
        let mut cur = s;
        while let Some(&next) = nbrs[cur].iter().find(|&&n| Some(n) != prev) {
            if seen[next] {
                break;
            }
            seen[next] = true;
            comp.push(next);
            prev = Some(cur);
            cur = next;
        }
        if comp.len() > max_len {
            return Err(Error::Internal(format!(
                "picked chores contain a path of {} vertices, limit {}",
                comp.len(),
                max_len
            )));
        }
        out.push(comp);
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::Internal("picked chores contain a cycle".into()));
    }
    Ok(out)
}

fn type_counts(pieces: &[Piece]) -> (usize, usize) {
    let heavy = pieces.iter().filter(|p| p.heavy).count();
    (heavy, pieces.len() - heavy)
}

/// One way to divide a meta agent's picks among its members.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    /// Chore ids per member, real and padding, ascending.
    pub bundles: Vec<Vec<usize>>,
    /// Padding chores per member as `(heavy, light)`.
    pub dummies: Vec<(usize, usize)>,
}

impl Split {
    pub fn dummy_totals(&self) -> Vec<usize> {
        self.dummies.iter().map(|(h, l)| h + l).collect()
    }
}

type Score = (usize, usize, usize);

fn spread(v: &[usize]) -> usize {
    v.iter().max().unwrap_or(&0) - v.iter().min().unwrap_or(&0)
}

/// Ways to hand `total` identical items to members with the given caps.
fn distributions(total: usize, caps: &[usize]) -> Vec<Vec<usize>> {
    fn go(total: usize, caps: &[usize], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == caps.len() {
            if total == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for take in 0..=total.min(caps[cur.len()]) {
            cur.push(take);
            go(total - take, caps, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(total, caps, &mut Vec::new(), &mut out);
    out
}

/// Completes `base` (the placed path components) with the isolated pieces
/// so every member reaches `target` of each type, once for every way of
/// distributing the padding. Each result is scored: fewest padding chores
/// of one type on one member first, then the most even padding totals,
/// then the most even padding per type. Returns nothing when `base`
/// already exceeds a target.
fn fill_options(
    pieces: &[Piece],
    isolated: &[usize],
    base: &[Vec<usize>],
    target: (usize, usize),
) -> Vec<(Score, Split)> {
    let members = base.len();
    let mut slots = [vec![0usize; members], vec![0usize; members]];
    for (m, bundle) in base.iter().enumerate() {
        let heavy = bundle.iter().filter(|&&i| pieces[i].heavy).count();
        let light = bundle.len() - heavy;
        if heavy > target.0 || light > target.1 {
            return Vec::new();
        }
        slots[0][m] = target.0 - heavy;
        slots[1][m] = target.1 - light;
    }
    let by_type = |heavy: bool, dummy: bool| -> Vec<usize> {
        isolated
            .iter()
            .copied()
            .filter(|&i| pieces[i].heavy == heavy && pieces[i].dummy == dummy)
            .collect()
    };
    let dummies = [by_type(true, true), by_type(false, true)];
    let reals = [by_type(true, false), by_type(false, false)];
    for t in 0..2 {
        if dummies[t].len() + reals[t].len() != slots[t].iter().sum::<usize>() {
            return Vec::new();
        }
    }
    let mut out = Vec::new();
    for h in distributions(dummies[0].len(), &slots[0]) {
        for l in distributions(dummies[1].len(), &slots[1]) {
            let mut bundles = base.to_vec();
            for (t, counts) in [&h, &l].into_iter().enumerate() {
                let mut dummy_iter = dummies[t].iter().copied();
                let mut real_iter = reals[t].iter().copied();
                for m in 0..members {
                    bundles[m].extend(dummy_iter.by_ref().take(counts[m]));
                    bundles[m].extend(real_iter.by_ref().take(slots[t][m] - counts[m]));
                }
            }
            let totals: Vec<usize> = h.iter().zip(&l).map(|(a, b)| a + b).collect();
            let worst = h.iter().chain(&l).copied().max().unwrap_or(0);
            let score = (worst, spread(&totals), spread(&h).max(spread(&l)));
            out.push((
                score,
                Split {
                    bundles: into_ids(pieces, bundles),
                    dummies: h.iter().copied().zip(l.iter().copied()).collect(),
                },
            ));
        }
    }
    out
}

/// Best first, one split per distinct padding layout.
fn rank(mut options: Vec<(Score, Split)>) -> Vec<Split> {
    options.sort_by_key(|(score, _)| *score);
    let mut seen = HashSet::new();
    options
        .into_iter()
        .filter(|(_, split)| seen.insert(split.dummies.clone()))
        .map(|(_, split)| split)
        .collect()
}

fn into_ids(pieces: &[Piece], bundles: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    bundles
        .into_iter()
        .map(|b| {
            let mut ids: Vec<usize> = b.into_iter().map(|i| pieces[i].id).collect();
            ids.sort_unstable();
            ids
        })
        .collect()
}

/// Candidate splits of a pair meta agent's picks, best first. The picks
/// must induce disjoint heavy-light edges plus isolated vertices, with even
/// heavy and light counts. Of `x` edges, `⌊x/2⌋` give the heavy end to the
/// first member and `⌈x/2⌉` give it to the second; isolated chores then
/// even out the counts.
pub fn pair_splits(pieces: &[Piece], graph: &ConflictGraph) -> Result<Vec<Split>> {
    let (heavy, light) = type_counts(pieces);
    if heavy % 2 != 0 || light % 2 != 0 {
        return Err(Error::Internal(format!(
            "pair bundle holds {heavy} heavy and {light} light chores, both must be even"
        )));
    }
    let comps = path_components(pieces, graph, 2)?;
    let mut edges = Vec::new();
    let mut isolated = Vec::new();
    for comp in comps {
        match comp.as_slice() {
            [single] => isolated.push(*single),
            [a, b] => {
                if pieces[*a].heavy == pieces[*b].heavy {
                    return Err(Error::Internal(format!(
                        "pair bundle contains adjacent chores {} and {} of the same type",
                        pieces[*a].id, pieces[*b].id
                    )));
                }
                let (h, l) = if pieces[*a].heavy { (*a, *b) } else { (*b, *a) };
                edges.push((h, l));
            }
            _ => unreachable!("components are capped at two vertices"),
        }
    }
    let mut base = vec![Vec::new(), Vec::new()];
    let first_half = edges.len() / 2;
    for (idx, &(h, l)) in edges.iter().enumerate() {
        let (to_heavy, to_light) = if idx < first_half { (0, 1) } else { (1, 0) };
        base[to_heavy].push(h);
        base[to_light].push(l);
    }
    let options = fill_options(pieces, &isolated, &base, (heavy / 2, light / 2));
    if options.is_empty() {
        return Err(Error::Internal("isolated chores cannot balance the pair split".into()));
    }
    Ok(rank(options))
}

/// Splits a pair meta agent's picks into two independent sets with equal
/// heavy and equal light counts.
pub fn split_pair_bundle(pieces: &[Piece], graph: &ConflictGraph) -> Result<[Vec<usize>; 2]> {
    let mut bundles = pair_splits(pieces, graph)?.swap_remove(0).bundles.into_iter();
    Ok([bundles.next().unwrap(), bundles.next().unwrap()])
}

/// Candidate splits of the triple meta agent's picks, best first. The
/// picks must induce paths of at most four vertices with heavy and light
/// counts divisible by three. Paths are coloured so that every pair of
/// members stays within one chore of each other per type after each path
/// (three-chore paths thus go to three members, four-chore paths give one
/// member both ends), and isolated chores then even out the counts.
pub fn triple_splits(pieces: &[Piece], graph: &ConflictGraph) -> Result<Vec<Split>> {
    let (heavy, light) = type_counts(pieces);
    if heavy % 3 != 0 || light % 3 != 0 {
        return Err(Error::Internal(format!(
            "triple bundle holds {heavy} heavy and {light} light chores, both must be multiples of three"
        )));
    }
    let comps = path_components(pieces, graph, 4)?;
    let (paths, singles): (Vec<_>, Vec<_>) = comps.into_iter().partition(|c| c.len() > 1);
    let isolated: Vec<usize> = singles.into_iter().flatten().collect();

    fn colourings(len: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![0], vec![1], vec![2]];
        for _ in 1..len {
            out = out
                .into_iter()
                .flat_map(|c| {
                    let last = *c.last().unwrap();
                    (0..3).filter(move |&a| a != last).map(move |a| {
                        let mut next = c.clone();
                        next.push(a);
                        next
                    })
                })
                .collect();
        }
        out
    }

    fn balanced(counts: &[[usize; 2]; 3]) -> bool {
        (0..2).all(|t| {
            let vals = counts.iter().map(|c| c[t]);
            vals.clone().max().unwrap() - vals.min().unwrap() <= 1
        })
    }

    struct Search<'a> {
        pieces: &'a [Piece],
        paths: &'a [Vec<usize>],
        counts: [[usize; 2]; 3],
        bundles: Vec<Vec<usize>>,
        visited: HashSet<(usize, [[usize; 2]; 3])>,
        leaves: Vec<Vec<Vec<usize>>>,
    }

    // The padding options depend only on the final per-member counts, and
    // the counts after a prefix of paths determine everything reachable
    // from it, so each (depth, counts) state is expanded once and one
    // colouring is kept per reachable final state.
    impl Search<'_> {
        fn run(&mut self, depth: usize) {
            if !self.visited.insert((depth, self.counts)) {
                return;
            }
            let Some(path) = self.paths.get(depth) else {
                self.leaves.push(self.bundles.clone());
                return;
            };
            for colouring in colourings(path.len()) {
                for (&i, &a) in path.iter().zip(&colouring) {
                    self.counts[a][usize::from(!self.pieces[i].heavy)] += 1;
                    self.bundles[a].push(i);
                }
                if balanced(&self.counts) {
                    self.run(depth + 1);
                }
                for (&i, &a) in path.iter().zip(&colouring) {
                    self.counts[a][usize::from(!self.pieces[i].heavy)] -= 1;
                    self.bundles[a].pop();
                }
            }
        }
    }

    let mut search = Search {
        pieces,
        paths: &paths,
        counts: [[0; 2]; 3],
        bundles: vec![Vec::new(); 3],
        visited: HashSet::new(),
        leaves: Vec::new(),
    };
    search.run(0);
    let options: Vec<(Score, Split)> = search
        .leaves
        .iter()
        .flat_map(|base| fill_options(pieces, &isolated, base, (heavy / 3, light / 3)))
        .collect();
    if options.is_empty() {
        return Err(Error::Internal(
            "no balanced conflict-free placement for the triple bundle".into(),
        ));
    }
    Ok(rank(options))
}

/// Splits the triple meta agent's picks into three independent sets with
/// equal heavy and equal light counts.
pub fn split_triple_bundle(pieces: &[Piece], graph: &ConflictGraph) -> Result<[Vec<usize>; 3]> {
    let mut bundles = triple_splits(pieces, graph)?.swap_remove(0).bundles.into_iter();
    Ok([
        bundles.next().unwrap(),
        bundles.next().unwrap(),
        bundles.next().unwrap(),
    ])
}
