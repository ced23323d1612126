use serde::{Deserialize, Serialize};

use super::{adjacency_test, gupta_test, GraphError, ADJACENCY_TOL, GUPTA_TOL};
use crate::channel::{KrausChannel, QuantumState};

/// Largest strong-product block length.
pub const MAX_BLOCK: usize = 3;
/// Vertex budget for strong products.
pub const MAX_PRODUCT_VERTICES: usize = 4096;

/// Confusability graph over words of input states.
///
/// Vertex `v` stands for the tensor product of `states[w]` over `w` in
/// `words[v]`; single-letter graphs have words `[0], [1], …`. The adjacency
/// matrix is symmetric with a false diagonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfusabilityGraph {
    pub states: Vec<QuantumState>,
    pub words: Vec<Vec<usize>>,
    pub adjacency: Vec<Vec<bool>>,
}

impl ConfusabilityGraph {
    /// Abstract graph with no attached states.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut adjacency = vec![vec![false; n]; n];
        for (i, j) in edges {
            if i != j {
                adjacency[i][j] = true;
                adjacency[j][i] = true;
            }
        }
        Self {
            states: Vec::new(),
            words: (0..n).map(|i| vec![i]).collect(),
            adjacency,
        }
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn is_adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacency[i][j]
    }

    /// Block length of the words.
    pub fn block_length(&self) -> usize {
        self.words.first().map_or(1, Vec::len)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.adjacency[i][j])
            .collect()
    }

    /// Whether the given vertices are pairwise non-adjacent.
    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(k, &i)| set[k + 1..].iter().all(|&j| i != j && !self.adjacency[i][j]))
    }
}

/// Pairwise [`adjacency_test`] over `states`. Pure pairs are also run through
/// [`gupta_test`], and the two verdicts must agree.
pub fn confusability_graph(ch: &KrausChannel, states: &[QuantumState]) -> Result<ConfusabilityGraph, GraphError> {
    let n = states.len();
    if n > super::MAX_VERTICES {
        return Err(GraphError::TooManyVertices {
            vertices: n,
            limit: super::MAX_VERTICES,
        });
    }
    for (index, s) in states.iter().enumerate() {
        if s.dim() != ch.dim() {
            return Err(GraphError::DimensionMismatch {
                index,
                expected: ch.dim(),
                found: s.dim(),
            });
        }
    }
    let mut adjacency = vec![vec![false; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let r = adjacency_test(ch, &states[i], &states[j], ADJACENCY_TOL)?;
            if let (Some(psi), Some(phi)) = (states[i].as_pure(), states[j].as_pure()) {
                let g = gupta_test(ch, psi, phi, GUPTA_TOL)?;
                if g.verdict != r.verdict {
                    return Err(GraphError::GuptaDisagreement {
                        i,
                        j,
                        trace_overlap: r.trace_overlap,
                        gupta_violation: g.max_violation,
                    });
                }
            }
            let adjacent = r.verdict.is_adjacent();
            adjacency[i][j] = adjacent;
            adjacency[j][i] = adjacent;
        }
    }
    Ok(ConfusabilityGraph {
        states: states.to_vec(),
        words: (0..n).map(|i| vec![i]).collect(),
        adjacency,
    })
}

/// `G^⊠n`: distinct words are adjacent iff every position is equal or adjacent.
/// Words are listed in lexicographic order.
pub fn strong_product_graph(g: &ConfusabilityGraph, n: usize) -> Result<ConfusabilityGraph, GraphError> {
    if n == 0 || n > MAX_BLOCK {
        return Err(GraphError::BlockLength(n));
    }
    let v = g.len();
    let size = v
        .checked_pow(n as u32)
        .filter(|s| *s <= MAX_PRODUCT_VERTICES)
        .ok_or(GraphError::BudgetExceeded {
            size: v.saturating_pow(n as u32),
            limit: MAX_PRODUCT_VERTICES,
        })?;

    let words: Vec<Vec<usize>> = (0..size)
        .map(|mut k| {
            let mut w = vec![0; n];
            for slot in w.iter_mut().rev() {
                *slot = k % v;
                k /= v;
            }
            w
        })
        .collect();
    let mut adjacency = vec![vec![false; size]; size];
    for a in 0..size {
        for b in a + 1..size {
            let adjacent = words[a].iter().zip(&words[b]).all(|(&x, &y)| x == y || g.is_adjacent(x, y));
            adjacency[a][b] = adjacent;
            adjacency[b][a] = adjacent;
        }
    }
    Ok(ConfusabilityGraph {
        states: g.states.clone(),
        words,
        adjacency,
    })
}
