//! Common eigenstates of a Kraus set.
//!
//! A unit vector with `A_i|ψ⟩ = λ_i|ψ⟩` for every `i` satisfies
//! `ℰ(|ψ⟩⟨ψ|) = (Σ|λ_i|²)|ψ⟩⟨ψ|`, and trace preservation forces `Σ|λ_i|² = 1`,
//! so `|ψ⟩` is a fixed point. An orthonormal family of `n_E` such vectors is a
//! zero-error codebook, certifying `C⁰ ≥ log₂ n_E`.

use std::cmp::Ordering;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::{apply, ChannelError, KrausChannel, QuantumState};
use crate::numerics::{
    cmp_complex, eigen_decompose, inner, null_space_abs, subspace_intersection, ComplexMatrix, NumericsError, Subspace, ABS_FLOOR,
    DEFAULT_INTERSECTION_TOL, EIGEN_RESIDUAL_TOL,
};

/// Joint eigenspace of all Kraus operators for one eigenvalue tuple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommonEigenstateCell {
    pub subspace: Subspace,
    /// `λ_i` for each Kraus operator, in Kraus order.
    pub eigenvalues: Vec<Complex64>,
    /// `Σ_i |λ_i|²`
    pub lambda_norm_sq: f64,
}

impl CommonEigenstateCell {
    pub fn dim(&self) -> usize {
        self.subspace.dim()
    }

    pub fn vectors(&self) -> &[crate::CVector] {
        self.subspace.basis()
    }
}

/// A `log₂` capacity bound; counts below 2 give the trivial bound 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapacityBound {
    pub count: usize,
    pub bits: f64,
    pub trivial: bool,
}

impl CapacityBound {
    pub fn from_count(count: usize) -> Self {
        if count >= 2 {
            Self {
                count,
                bits: (count as f64).log2(),
                trivial: false,
            }
        } else {
            Self {
                count,
                bits: 0.0,
                trivial: true,
            }
        }
    }
}

/// `C⁰ ≥ log₂ n_E`, trivial for `n_E ≤ 1`.
pub fn theorem1_bound(n_e: usize) -> CapacityBound {
    CapacityBound::from_count(n_e)
}

/// All common eigenstates of the Kraus operators, grouped by eigenvalue tuple.
///
/// The eigenspaces of `A_1` seed the cells; each later `A_i` splits every
/// surviving cell by intersecting it with each of its own eigenspaces. The
/// surviving cells are then recomputed exactly as the kernel of the stacked
/// operator `[(A_1 − λ_1 I)/‖A_1‖; …; (A_κ − λ_κ I)/‖A_κ‖]`, which pins every
/// returned vector to the per-operator residual bound. `tol` is the eigenvalue
/// clustering tolerance relative to each operator norm. Cells come out sorted
/// by eigenvalue tuple (real part, then imaginary part, operator by operator),
/// each with the canonical basis of [`Subspace::canonical`].
///
/// Validation is not required; the search is purely spectral.
pub fn find_common_eigenstates(ch: &KrausChannel, tol: f64) -> Result<Vec<CommonEigenstateCell>, NumericsError> {
    let d = ch.dim();
    let ops = ch.kraus();
    let norms: Vec<f64> = ops.iter().map(|a| a.norm_op().max(ABS_FLOOR)).collect();

    let mut cells: Vec<(Subspace, Vec<Complex64>)> = eigen_decompose(&ops[0], tol)?
        .into_iter()
        .map(|p| (p.space, vec![p.value]))
        .collect();

    for a in &ops[1..] {
        if cells.is_empty() {
            break;
        }
        let pairs = eigen_decompose(a, tol)?;
        let mut next = Vec::new();
        for (space, tuple) in &cells {
            for pair in &pairs {
                let meet = subspace_intersection(space, &pair.space, DEFAULT_INTERSECTION_TOL)?;
                if !meet.is_empty() {
                    let mut t = tuple.clone();
                    t.push(pair.value);
                    next.push((meet, t));
                }
            }
        }
        cells = next;
    }

    let mut out = Vec::with_capacity(cells.len());
    for (meet, tuple) in cells {
        let Some((exact, tuple)) = polish(ops, &norms, &meet, tuple)? else {
            continue;
        };
        let lambda_norm_sq = tuple.iter().map(|z| z.norm_sqr()).sum();
        out.push(CommonEigenstateCell {
            subspace: exact.canonical(),
            eigenvalues: tuple,
            lambda_norm_sq,
        });
    }
    let max_norm = norms.iter().cloned().fold(0.0, f64::max);
    out.sort_by(|a, b| cmp_tuples(&a.eigenvalues, &b.eigenvalues, tol * max_norm));
    debug_assert!(out.iter().all(|c| c.subspace.ambient_dim() == d));
    Ok(out)
}

/// Recomputes a cell as an exact joint kernel. Eigenvalues from the QR sweep
/// can be off by `√ε` at defective eigenvalues, so Rayleigh quotients over the
/// approximate cell, and then over a loose kernel, are tried as fallbacks.
fn polish(
    ops: &[ComplexMatrix],
    norms: &[f64],
    approx: &Subspace,
    tuple: Vec<Complex64>,
) -> Result<Option<(Subspace, Vec<Complex64>)>, NumericsError> {
    let exact = joint_kernel(ops, norms, &tuple, EIGEN_RESIDUAL_TOL)?;
    if !exact.is_empty() {
        return Ok(Some((exact, tuple)));
    }
    let mut guess = rayleigh_tuple(ops, approx);
    for _ in 0..3 {
        let exact = joint_kernel(ops, norms, &guess, EIGEN_RESIDUAL_TOL)?;
        if !exact.is_empty() {
            return Ok(Some((exact, guess)));
        }
        let loose = joint_kernel(ops, norms, &guess, 1e-5)?;
        if loose.is_empty() {
            break;
        }
        guess = rayleigh_tuple(ops, &loose);
    }
    Ok(None)
}

fn rayleigh_tuple(ops: &[ComplexMatrix], space: &Subspace) -> Vec<Complex64> {
    let k = space.dim().max(1) as f64;
    ops.iter()
        .map(|a| space.basis().iter().map(|b| inner(b, &a.mul_vec(b))).sum::<Complex64>() / k)
        .collect()
}

fn joint_kernel(ops: &[ComplexMatrix], norms: &[f64], tuple: &[Complex64], tol: f64) -> Result<Subspace, NumericsError> {
    let d = ops[0].rows();
    let mut stacked = ComplexMatrix::zeros(d * ops.len(), d);
    for (k, ((a, lambda), scale)) in ops.iter().zip(tuple).zip(norms).enumerate() {
        for i in 0..d {
            for j in 0..d {
                let mut z = a[(i, j)];
                if i == j {
                    z -= lambda;
                }
                stacked[(k * d + i, j)] = z / *scale;
            }
        }
    }
    // Blocks are scaled by 1/‖A_i‖, so an absolute threshold on the stack
    // bounds every ‖(A_i − λ_i)v‖ by tol·‖A_i‖.
    null_space_abs(&stacked, tol)
}

fn cmp_tuples(a: &[Complex64], b: &[Complex64], tol: f64) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| cmp_complex(*x, *y, tol))
        .find(|o| *o != Ordering::Equal)
        .unwrap_or(Ordering::Equal)
}

/// Total dimension of the cells: the size of the orthonormal common-eigenstate family.
pub fn common_eigenstate_count(cells: &[CommonEigenstateCell]) -> usize {
    cells.iter().map(CommonEigenstateCell::dim).sum()
}

/// Whether cells with distinct tuples span mutually orthogonal subspaces.
/// Always true for CPTP channels; may fail for invalid Kraus sets.
pub fn cells_orthogonal(cells: &[CommonEigenstateCell], tol: f64) -> bool {
    cells.iter().enumerate().all(|(i, a)| {
        cells[i + 1..]
            .iter()
            .all(|b| a.vectors().iter().all(|u| b.vectors().iter().all(|v| inner(u, v).norm() <= tol)))
    })
}

/// Per-vector check that a common eigenstate is a fixed point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemmaVerdict {
    pub is_fixed_point: bool,
    /// `Σ_i |⟨ψ|A_i|ψ⟩|²`
    pub lambda_norm_sq: f64,
    /// `‖ℰ(|ψ⟩⟨ψ|) − |ψ⟩⟨ψ|‖_max`
    pub fixed_point_residual: f64,
    /// `‖ℰ(|ψ⟩⟨ψ|) − (Σ|λ_i|²)|ψ⟩⟨ψ|‖_max`; small for any common eigenvector.
    pub scaling_residual: f64,
    /// `|Σ|λ_i|² − 1| ≤ tol`
    pub normalized: bool,
}

/// Checks each basis vector of `cell`: applies the channel and compares with
/// the input, and reports `Σ|λ_i|²`, which must be 1 for a trace-preserving
/// channel.
pub fn verify_lemma1(ch: &KrausChannel, cell: &CommonEigenstateCell, tol: f64) -> Result<Vec<LemmaVerdict>, ChannelError> {
    cell.vectors()
        .iter()
        .map(|psi| {
            let out = apply(ch, &QuantumState::Pure(psi.clone()))?;
            let proj = ComplexMatrix::outer(psi, psi);
            let lambda_norm_sq: f64 = ch.kraus().iter().map(|a| inner(psi, &a.mul_vec(psi)).norm_sqr()).sum();
            let fixed_point_residual = (&out - &proj).norm_max();
            let scaling_residual = (&out - &proj.scale_real(lambda_norm_sq)).norm_max();
            Ok(LemmaVerdict {
                is_fixed_point: fixed_point_residual <= tol,
                lambda_norm_sq,
                fixed_point_residual,
                scaling_residual,
                normalized: (lambda_norm_sq - 1.0).abs() <= tol,
            })
        })
        .collect()
}

/// Common eigenstates, per-vector fixed-point checks and the resulting bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub cells: Vec<CommonEigenstateCell>,
    pub n_e: usize,
    pub capacity_lower_bound: CapacityBound,
    pub fixed_point_verified: Vec<bool>,
    pub verdicts: Vec<Vec<LemmaVerdict>>,
    pub cells_orthogonal: bool,
}

pub fn spectral_report(ch: &KrausChannel, eig_tol: f64, fixed_tol: f64) -> Result<SpectralReport, crate::Error> {
    let cells = find_common_eigenstates(ch, eig_tol)?;
    let verdicts = cells
        .iter()
        .map(|c| verify_lemma1(ch, c, fixed_tol))
        .collect::<Result<Vec<_>, _>>()?;
    let n_e = common_eigenstate_count(&cells);
    Ok(SpectralReport {
        fixed_point_verified: verdicts.iter().map(|v| v.iter().all(|x| x.is_fixed_point)).collect(),
        cells_orthogonal: cells_orthogonal(&cells, 1e-8),
        capacity_lower_bound: theorem1_bound(n_e),
        n_e,
        cells,
        verdicts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::STRICT_TOL;
    use crate::numerics::DEFAULT_CLUSTER_TOL;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn bounds() {
        assert_eq!(theorem1_bound(2).bits, 1.0);
        assert_eq!(theorem1_bound(4).bits, 2.0);
        assert!((theorem1_bound(3).bits - 1.584_962_500_721_156).abs() < 1e-15);
        let one = theorem1_bound(1);
        assert!(one.trivial && one.bits == 0.0);
        assert!(theorem1_bound(0).trivial);
    }

    #[test]
    fn pauli_pair_has_no_common_eigenvector() {
        let h = 0.5f64.sqrt();
        let x = ComplexMatrix::from_real(2, 2, &[0.0, h, h, 0.0]);
        let z = ComplexMatrix::from_real(2, 2, &[h, 0.0, 0.0, -h]);
        let ch = KrausChannel::new("xz", vec![x, z]).unwrap();
        assert!(find_common_eigenstates(&ch, DEFAULT_CLUSTER_TOL).unwrap().is_empty());
    }

    #[test]
    fn unitary_channel_is_fully_covered() {
        let u = ComplexMatrix::diag(&[c(1.0), Complex64::new(0.0, 1.0), c(-1.0)]);
        let ch = KrausChannel::new("u", vec![u]).unwrap();
        let cells = find_common_eigenstates(&ch, DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(common_eigenstate_count(&cells), 3);
        // ordered by real part: -1, i, 1
        assert!((cells[0].eigenvalues[0] - c(-1.0)).norm() < 1e-14);
        assert!((cells[2].eigenvalues[0] - c(1.0)).norm() < 1e-14);
    }

    #[test]
    fn identical_tuples_share_a_cell() {
        let a = ComplexMatrix::diag(&[c(0.6), c(0.6), c(0.0)]);
        let b = ComplexMatrix::diag(&[c(0.8), c(0.8), c(1.0)]);
        let ch = KrausChannel::new("blocks", vec![a, b]).unwrap().validated(STRICT_TOL).unwrap();
        let cells = find_common_eigenstates(&ch, DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(cells.len(), 2);
        assert_eq!(cells[0].dim(), 1);
        assert_eq!(cells[1].dim(), 2);
        let verdicts = verify_lemma1(&ch, &cells[1], 1e-10).unwrap();
        assert!(verdicts.iter().all(|v| v.is_fixed_point && v.normalized));
    }
}
