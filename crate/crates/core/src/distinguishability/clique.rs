use serde::{Deserialize, Serialize};

use super::{ConfusabilityGraph, GraphError};

/// Vertex limit for the bitset search.
pub const MAX_VERTICES: usize = 64;

/// A maximum independent set and its size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndependentSet {
    pub alpha: usize,
    /// Ascending vertex indices; lexicographically smallest among maxima.
    pub vertices: Vec<usize>,
}

/// Exact independence number by branch and bound for a maximum clique in the
/// complement graph.
///
/// Vertices are branched on in ascending order with the include branch first,
/// so cliques are visited in lexicographic order; since the incumbent changes
/// only on strict improvement, the reported set is the lexicographically
/// smallest maximum. Greedy coloring of the candidate set bounds each branch.
pub fn independence_number(g: &ConfusabilityGraph) -> Result<IndependentSet, GraphError> {
    let n = g.len();
    if n > MAX_VERTICES {
        return Err(GraphError::TooManyVertices {
            vertices: n,
            limit: MAX_VERTICES,
        });
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let complement: Vec<u64> = (0..n)
        .map(|v| {
            let mut row = 0u64;
            for u in 0..n {
                if u != v && !g.is_adjacent(u, v) {
                    row |= 1 << u;
                }
            }
            row
        })
        .collect();

    let mut search = Search {
        adj: &complement,
        best_size: 0,
        best_set: 0,
    };
    search.expand(0, 0, full);
    Ok(IndependentSet {
        alpha: search.best_size,
        vertices: bits(search.best_set),
    })
}

struct Search<'a> {
    adj: &'a [u64],
    best_size: usize,
    best_set: u64,
}

impl Search<'_> {
    fn expand(&mut self, clique: u64, size: usize, candidates: u64) {
        if candidates == 0 {
            if size > self.best_size {
                self.best_size = size;
                self.best_set = clique;
            }
            return;
        }
        if size + color_bound(candidates, self.adj) <= self.best_size {
            return;
        }
        let mut rest = candidates;
        while rest != 0 {
            if size + rest.count_ones() as usize <= self.best_size {
                return;
            }
            let v = rest.trailing_zeros() as usize;
            self.expand(clique | 1 << v, size + 1, rest & self.adj[v]);
            rest &= !(1 << v);
        }
    }
}

/// Number of colors in a greedy coloring of `set`, an upper bound on any clique inside it.
fn color_bound(set: u64, adj: &[u64]) -> usize {
    let mut uncolored = set;
    let mut colors = 0;
    while uncolored != 0 {
        colors += 1;
        let mut class = uncolored;
        while class != 0 {
            let v = class.trailing_zeros() as usize;
            class &= !(1 << v) & !adj[v];
            uncolored &= !(1 << v);
        }
    }
    colors
}

fn bits(mut set: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(set.count_ones() as usize);
    while set != 0 {
        let v = set.trailing_zeros() as usize;
        out.push(v);
        set &= set - 1;
    }
    out
}
