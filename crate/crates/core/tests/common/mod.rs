//! Reference implementations used only by tests. They work directly from
//! the chore intervals and the definitions, sharing no code with the
//! library's checkers.
#![allow(dead_code)]

use chore_sched::{Chore, Instance, Schedule};

pub fn overlaps(a: &Chore, b: &Chore) -> bool {
    a.start < b.finish && b.start < a.finish
}

pub fn bundle(s: &Schedule, agent: usize) -> Vec<usize> {
    (0..s.chore_count()).filter(|&c| s.agent_of(c) == Some(agent)).collect()
}

pub fn feasible(inst: &Instance, s: &Schedule) -> bool {
    let ch = inst.chores();
    (0..ch.len()).all(|a| {
        (a + 1..ch.len())
            .all(|b| !(s.agent_of(a).is_some() && s.agent_of(a) == s.agent_of(b) && overlaps(&ch[a], &ch[b])))
    })
}

pub fn maximal(inst: &Instance, s: &Schedule) -> bool {
    let ch = inst.chores();
    feasible(inst, s)
        && (0..ch.len())
            .filter(|&c| s.agent_of(c).is_none())
            .all(|c| (0..s.agents()).all(|a| bundle(s, a).iter().any(|&d| overlaps(&ch[c], &ch[d]))))
}

pub fn envy_free_up_to(inst: &Instance, s: &Schedule, k: usize) -> bool {
    let n = s.agents();
    (0..n).all(|i| {
        (0..n).filter(|&j| j != i).all(|j| {
            let own = bundle(s, i);
            let other = inst.value(i, &bundle(s, j));
            let cured = subsets_up_to(&own, k).any(|removed| {
                let rest: Vec<usize> = own.iter().copied().filter(|c| !removed.contains(c)).collect();
                inst.value(i, &rest) >= other
            });
            cured
        })
    })
}

pub fn ef1(inst: &Instance, s: &Schedule) -> bool {
    envy_free_up_to(inst, s, 1)
}

fn subsets_up_to(items: &[usize], k: usize) -> impl Iterator<Item = Vec<usize>> + '_ {
    let n = items.len();
    (0u32..(1u32 << n))
        .filter(move |mask| mask.count_ones() as usize <= k)
        .map(move |mask| (0..n).filter(|&b| mask >> b & 1 == 1).map(|b| items[b]).collect())
}

/// Every assignment vector, filtered to the maximal ones. Exponential; use
/// only on small instances.
pub fn all_maximal(inst: &Instance) -> Vec<Schedule> {
    let m = inst.chore_count();
    let n = inst.agents();
    let mut out = Vec::new();
    let mut digits = vec![0usize; m];
    loop {
        let assignment = digits
            .iter()
            .map(|&d| if d == 0 { None } else { Some(d - 1) })
            .collect();
        let s = Schedule::from_assignment(n, assignment).unwrap();
        if maximal(inst, &s) {
            out.push(s);
        }
        let mut pos = 0;
        loop {
            if pos == m {
                return out;
            }
            digits[pos] += 1;
            if digits[pos] <= n {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}

pub fn has_cycle(edges: &[(usize, usize)], n: usize) -> bool {
    // Repeatedly strip vertices without outgoing edges.
    let mut alive = vec![true; n];
    loop {
        let removable: Vec<usize> = (0..n)
            .filter(|&v| alive[v] && !edges.iter().any(|&(a, b)| a == v && alive[b]))
            .collect();
        if removable.is_empty() {
            return alive.iter().any(|&a| a);
        }
        for v in removable {
            alive[v] = false;
        }
    }
}

/// Both bundles change by at most one addition and one removal.
pub fn adjacent(x: &Schedule, y: &Schedule) -> bool {
    (0..2).all(|a| {
        let (bx, by) = (bundle(x, a), bundle(y, a));
        by.iter().filter(|c| !bx.contains(c)).count() <= 1 && bx.iter().filter(|c| !by.contains(c)).count() <= 1
    })
}
