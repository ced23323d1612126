//! The fixed-operator space `{X : ℰ(X) = X}` and pure fixed states.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::channel::{apply, apply_operator, superoperator_matrix, ChannelError, KrausChannel, QuantumState};
use crate::numerics::{hermitian_eigen, inner, normalized, null_space, CVector, ComplexMatrix, Subspace};
use crate::spectral::{CapacityBound, CommonEigenstateCell};

/// Kernel tolerance for `L − I`, relative to its norm.
pub const DEFAULT_FIXED_TOL: f64 = 1e-9;
/// Residual allowed for a fixed state or a fixed-space basis element.
pub const FIXED_POINT_TOL: f64 = 1e-8;

const RANDOM_PROBES: usize = 8;
const PROBE_SEED: u64 = 0x5eed;

/// Basis of `null(L − I)`, Hermitian and orthonormal under `⟨X,Y⟩ = tr(X†Y)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedSpace {
    pub dimension: usize,
    pub basis: Vec<ComplexMatrix>,
    /// Largest `‖ℰ(X) − X‖_max` over the basis.
    pub max_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedSpaceReport {
    pub dimension: usize,
    pub basis: Vec<ComplexMatrix>,
    pub max_residual: f64,
    /// Pairwise orthogonal pure fixed states: common eigenstates first, then
    /// any found by the greedy extension.
    pub orthogonal_pure_fixed_states: Vec<CVector>,
    /// `N_f^⊥`, a lower bound on the number of orthogonal pure fixed states.
    pub orthogonal_pure_fixed_count: usize,
    pub prop_bound: CapacityBound,
}

/// Solves `L vec(X) = vec(X)` and returns a Hermitian orthonormal basis.
///
/// A Hermiticity-preserving map has an adjoint-closed fixed space, so the
/// Hermitian and anti-Hermitian parts of every kernel element are again fixed
/// and together span the same space.
pub fn fixed_space(ch: &KrausChannel, tol: f64) -> Result<FixedSpace, crate::Error> {
    let d = ch.dim();
    let l = superoperator_matrix(ch)?;
    let kernel = null_space(&(&l - &ComplexMatrix::identity(d * d)), tol)?;

    let mut parts = Vec::with_capacity(2 * kernel.dim());
    for v in kernel.basis() {
        let x = ComplexMatrix::unvec_columns(v, d);
        let xa = x.adjoint();
        parts.push((&x + &xa).scale_real(0.5).vec_columns());
        parts.push((&x - &xa).scale(Complex64::new(0.0, -0.5)).vec_columns());
    }
    // Inner products of Hermitian matrices are real, so Gram-Schmidt keeps
    // the basis Hermitian up to rounding.
    let span = Subspace::span(d * d, &parts, 1e-8);
    let basis: Vec<ComplexMatrix> = span
        .basis()
        .iter()
        .map(|v| ComplexMatrix::unvec_columns(v, d).hermitian_part())
        .collect();

    let mut max_residual: f64 = 0.0;
    for x in &basis {
        max_residual = max_residual.max((&apply_operator(ch, x)? - x).norm_max());
    }
    Ok(FixedSpace {
        dimension: basis.len(),
        basis,
        max_residual,
    })
}

/// `‖ℰ(ρ) − ρ‖_max ≤ tol`.
pub fn is_fixed_point(ch: &KrausChannel, rho: &QuantumState, tol: f64) -> Result<bool, ChannelError> {
    Ok(fixed_point_residual(ch, rho)? <= tol)
}

pub fn fixed_point_residual(ch: &KrausChannel, rho: &QuantumState) -> Result<f64, ChannelError> {
    Ok((&apply(ch, rho)? - &rho.density()).norm_max())
}

/// A maximal-by-search family of pairwise orthogonal pure fixed states.
///
/// Cell vectors that pass [`is_fixed_point`] are taken first. The family is
/// then extended greedily: Hermitian fixed operators (the basis plus seeded
/// random combinations) are compressed onto the orthogonal complement of the
/// current family, and their eigenvectors are accepted when fixed. Failing to
/// extend does not prove that no further state exists.
pub fn orthogonal_pure_fixed_states(
    ch: &KrausChannel,
    fixed: &FixedSpace,
    cells: &[CommonEigenstateCell],
    tol: f64,
) -> Result<Vec<CVector>, ChannelError> {
    let d = ch.dim();
    let mut chosen: Vec<CVector> = Vec::new();
    for v in cells.iter().flat_map(|c| c.vectors()) {
        if orthogonal_to_all(v, &chosen) && is_fixed_point(ch, &QuantumState::Pure(v.clone()), tol)? {
            chosen.push(v.clone());
        }
    }

    let mut probes = fixed.basis.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED);
    for _ in 0..RANDOM_PROBES.min(fixed.dimension.saturating_sub(1)) {
        let mut h = ComplexMatrix::zeros(d, d);
        for x in &fixed.basis {
            h = &h + &x.scale_real(rng.random_range(-1.0..1.0));
        }
        probes.push(h);
    }

    loop {
        if chosen.len() == d {
            break;
        }
        let complement = Subspace::span(d, &chosen, 1e-8).orthogonal_complement();
        let p = complement.projector();
        let mut found = None;
        'probe: for h in &probes {
            let compressed = (&(&p * h) * &p).hermitian_part();
            let (values, vectors) = hermitian_eigen(&compressed)?;
            let scale = compressed.norm_max().max(f64::MIN_POSITIVE);
            for (value, v) in values.iter().zip(vectors) {
                if value.abs() <= 1e-9 * scale {
                    continue;
                }
                let Some(v) = normalized(&complement.project(&v)) else {
                    continue;
                };
                if orthogonal_to_all(&v, &chosen) && is_fixed_point(ch, &QuantumState::Pure(v.clone()), tol)? {
                    found = Some(v);
                    break 'probe;
                }
            }
        }
        match found {
            Some(v) => chosen.push(v),
            None => break,
        }
    }
    Ok(chosen)
}

fn orthogonal_to_all(v: &[Complex64], family: &[CVector]) -> bool {
    family.iter().all(|u| inner(u, v).norm() <= 1e-8)
}

/// `C⁰ ≥ log₂ N_f^⊥`, trivial below 2.
pub fn proposition_bound(n_f_perp: usize) -> CapacityBound {
    CapacityBound::from_count(n_f_perp)
}

/// Fixed space, the orthogonal pure fixed family and its bound.
pub fn fixed_space_report(ch: &KrausChannel, cells: &[CommonEigenstateCell], tol: f64) -> Result<FixedSpaceReport, crate::Error> {
    let fixed = fixed_space(ch, tol)?;
    let states = orthogonal_pure_fixed_states(ch, &fixed, cells, FIXED_POINT_TOL)?;
    Ok(FixedSpaceReport {
        dimension: fixed.dimension,
        max_residual: fixed.max_residual,
        orthogonal_pure_fixed_count: states.len(),
        prop_bound: proposition_bound(states.len()),
        orthogonal_pure_fixed_states: states,
        basis: fixed.basis,
    })
}
