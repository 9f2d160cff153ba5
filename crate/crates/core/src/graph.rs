use crate::instance::Chore;
use crate::ChoreId;

/// Overlap graph over chores. Intervals are half-open, so `[a, b)` and
/// `[b, c)` do not conflict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConflictGraph {
    adjacency: Vec<Vec<ChoreId>>,
    edge_count: usize,
}

pub fn intervals_overlap(a: &Chore, b: &Chore) -> bool {
    a.start < b.finish && b.start < a.finish
}

pub fn build_conflict_graph(chores: &[Chore]) -> ConflictGraph {
    let m = chores.len();
    let mut adjacency = vec![Vec::new(); m];
    let mut edge_count = 0;
    for i in 0..m {
        for j in i + 1..m {
            if intervals_overlap(&chores[i], &chores[j]) {
                adjacency[chores[i].id].push(chores[j].id);
                adjacency[chores[j].id].push(chores[i].id);
                edge_count += 1;
            }
        }
    }
    for list in &mut adjacency {
        list.sort_unstable();
    }
    ConflictGraph { adjacency, edge_count }
}

impl ConflictGraph {
    /// Builds a graph directly from an edge list; used for non-interval
    /// structures such as the padded graphs of the meta-agent solver.
    pub fn from_edges(m: usize, edges: &[(ChoreId, ChoreId)]) -> Self {
        let mut adjacency = vec![Vec::new(); m];
        for &(a, b) in edges {
            if a != b && !adjacency[a].contains(&b) {
                adjacency[a].push(b);
                adjacency[b].push(a);
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let edge_count = adjacency.iter().map(Vec::len).sum::<usize>() / 2;
        ConflictGraph { adjacency, edge_count }
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, chore: ChoreId) -> &[ChoreId] {
        &self.adjacency[chore]
    }

    pub fn degree(&self, chore: ChoreId) -> usize {
        self.adjacency[chore].len()
    }

    pub fn conflicts(&self, a: ChoreId, b: ChoreId) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (ChoreId, ChoreId)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(a, list)| list.iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
    }

    /// Connected components, each sorted ascending, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<ChoreId>> {
        let m = self.len();
        let mut seen = vec![false; m];
        let mut out = Vec::new();
        for root in 0..m {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut stack = vec![root];
            let mut comp = Vec::new();
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &w in &self.adjacency[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Every component is a simple path (isolated vertices included).
    pub fn is_linear_forest(&self) -> bool {
        if self.adjacency.iter().any(|l| l.len() > 2) {
            return false;
        }
        // With max degree 2 a component is a path iff it has |C| - 1 edges.
        self.components().iter().all(|comp| {
            let degree_sum: usize = comp.iter().map(|&v| self.degree(v)).sum();
            degree_sum / 2 + 1 == comp.len()
        })
    }

    /// A single simple path over all vertices. The empty graph is not a path.
    pub fn is_path(&self) -> bool {
        !self.is_empty() && self.edge_count + 1 == self.len() && self.is_linear_forest()
    }

    /// Interval-built graphs are always interval graphs.
    pub fn is_interval(&self) -> bool {
        true
    }
}
