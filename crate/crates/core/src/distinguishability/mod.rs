//! Adjacency of input states, confusability graphs and their independence numbers.
//!
//! Two inputs are non-adjacent when their outputs have orthogonal supports, so
//! a measurement tells them apart with certainty. Sets of pairwise
//! non-adjacent inputs are zero-error codebooks.

mod clique;
mod graph;

pub use clique::{independence_number, IndependentSet, MAX_VERTICES};
pub use graph::{confusability_graph, strong_product_graph, ConfusabilityGraph, MAX_BLOCK, MAX_PRODUCT_VERTICES};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::{apply, ChannelError, KrausChannel, QuantumState};
use crate::numerics::{inner, support_projector, NumericsError};

/// Trace-overlap threshold below which outputs count as orthogonal.
pub const ADJACENCY_TOL: f64 = 1e-9;
/// Relative threshold for `⟨ψ|A_i†A_j|φ⟩`, scaled by `max ‖A_i†A_j‖`.
pub const GUPTA_TOL: f64 = 1e-9;
/// Eigenvalue cut, relative to the trace, for output support projectors.
pub const SUPPORT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("adjacency criteria disagree: trace overlap {trace_overlap:.3e}, projector overlap {projector_overlap:.3e}")]
    CriteriaDisagreement { trace_overlap: f64, projector_overlap: f64 },
    #[error("adjacency criteria disagree on states {i} and {j}: trace overlap {trace_overlap:.3e}, max Gupta term {gupta_violation:.3e}")]
    GuptaDisagreement {
        i: usize,
        j: usize,
        trace_overlap: f64,
        gupta_violation: f64,
    },
    #[error("{vertices} vertices exceed the limit of {limit}")]
    TooManyVertices { vertices: usize, limit: usize },
    #[error("strong product has {size} vertices, budget is {limit}")]
    BudgetExceeded { size: usize, limit: usize },
    #[error("block length {0} is outside 1..=3")]
    BlockLength(usize),
    #[error("state {index} has dimension {found}, channel acts on {expected}")]
    DimensionMismatch { index: usize, expected: usize, found: usize },
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Adjacency {
    NonAdjacent,
    Adjacent,
}

impl Adjacency {
    pub fn is_adjacent(self) -> bool {
        self == Self::Adjacent
    }

    fn from_adjacent(adjacent: bool) -> Self {
        if adjacent {
            Self::Adjacent
        } else {
            Self::NonAdjacent
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdjacencyResult {
    pub verdict: Adjacency,
    /// `tr[ℰ(ρ)ℰ(σ)]`
    pub trace_overlap: f64,
    /// `‖Π_ρ Π_σ‖_F` for the output support projectors.
    pub projector_overlap: f64,
}

/// Non-adjacent iff `tr[ℰ(ρ)ℰ(σ)] ≤ tol`.
///
/// For PSD outputs a vanishing trace product is the same as orthogonal
/// supports; the support projectors are compared as a cross-check, with
/// `‖Π_ρΠ_σ‖_F ≤ √tol` counting as orthogonal. A disagreement is an error.
pub fn adjacency_test(ch: &KrausChannel, rho: &QuantumState, sigma: &QuantumState, tol: f64) -> Result<AdjacencyResult, GraphError> {
    let out_r = apply(ch, rho)?;
    let out_s = apply(ch, sigma)?;
    let trace_overlap = out_r.hs_inner(&out_s).re;
    let pr = support_projector(&out_r, SUPPORT_TOL)?;
    let ps = support_projector(&out_s, SUPPORT_TOL)?;
    let projector_overlap = (&pr * &ps).norm_fro();
    let by_trace = trace_overlap > tol;
    let by_projector = projector_overlap > tol.sqrt();
    if by_trace != by_projector {
        return Err(GraphError::CriteriaDisagreement {
            trace_overlap,
            projector_overlap,
        });
    }
    Ok(AdjacencyResult {
        verdict: Adjacency::from_adjacent(by_trace),
        trace_overlap,
        projector_overlap,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GuptaResult {
    pub verdict: Adjacency,
    /// `max_{i,j} |⟨ψ|A_i†A_j|φ⟩|`
    pub max_violation: f64,
    /// `Σ_{i,j} |⟨ψ|A_i†A_j|φ⟩|²`, which equals `tr[ℰ(ψ)ℰ(φ)]`.
    pub overlap: f64,
}

/// Non-adjacent iff `|φ⟩` is orthogonal to `S|ψ⟩` for `S = span{A_i†A_j}`:
/// every `|⟨ψ|A_i†A_j|φ⟩| ≤ tol·max ‖A_i†A_j‖`.
pub fn gupta_test(ch: &KrausChannel, psi: &[Complex64], phi: &[Complex64], tol: f64) -> Result<GuptaResult, GraphError> {
    let d = ch.dim();
    for v in [psi, phi] {
        if v.len() != d {
            return Err(ChannelError::DimensionMismatch {
                expected: d,
                found: v.len(),
            }
            .into());
        }
    }
    let images: Vec<_> = ch.kraus().iter().map(|a| (a.mul_vec(psi), a.mul_vec(phi))).collect();
    let mut scale: f64 = 0.0;
    let mut max_violation: f64 = 0.0;
    let mut overlap = 0.0;
    for (ai, (ai_psi, _)) in ch.kraus().iter().zip(&images) {
        for (aj, (_, aj_phi)) in ch.kraus().iter().zip(&images) {
            scale = scale.max((&ai.adjoint() * aj).norm_op());
            let term = inner(ai_psi, aj_phi).norm();
            max_violation = max_violation.max(term);
            overlap += term * term;
        }
    }
    Ok(GuptaResult {
        verdict: Adjacency::from_adjacent(max_violation > tol * scale),
        max_violation,
        overlap,
    })
}

/// Computational basis pairs `(a, b)`, `a < b`, that pass [`gupta_test`].
pub fn basis_pair_scan(ch: &KrausChannel) -> Result<Vec<(usize, usize)>, GraphError> {
    let d = ch.dim();
    let basis: Vec<_> = (0..d).map(|k| crate::numerics::basis_vector(d, k)).collect();
    let mut found = Vec::new();
    for a in 0..d {
        for b in a + 1..d {
            if !gupta_test(ch, &basis[a], &basis[b], GUPTA_TOL)?.verdict.is_adjacent() {
                found.push((a, b));
            }
        }
    }
    Ok(found)
}

/// `(1/n) log₂ α_n` bits per channel use.
pub fn n_shot_bound(alpha: usize, n: usize) -> f64 {
    assert!(n >= 1, "block length must be positive");
    if alpha <= 1 {
        0.0
    } else {
        (alpha as f64).log2() / n as f64
    }
}
