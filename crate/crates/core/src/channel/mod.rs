//! Quantum channels in Kraus form.
//!
//! `ℰ(ρ) = Σ_i A_i ρ A_i†` with `κ` square `d×d` Kraus operators. A channel is
//! only usable for application once its completeness residual
//! `‖Σ A_i†A_i − I‖_max` has been checked (or the check explicitly overridden,
//! which downgrades every certificate derived from it).
//!
//! Vectorization is column-stacking throughout: `vec(AXB) = (Bᵀ ⊗ A) vec(X)`,
//! so the superoperator matrix is `Σ conj(A_i) ⊗ A_i`.

mod parse;
mod state;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{ComplexMatrix, NumericsError};

pub use parse::{channel_to_json, evaluate, load_channel, parse_channel, parse_states, ChannelFile, Claims, LoadedChannel, Params, Scalar};
pub use state::QuantumState;

/// Completeness tolerance for the strict tier.
pub const STRICT_TOL: f64 = 1e-9;
/// Completeness tolerance for the lenient tier.
pub const LENIENT_TOL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    #[error("channel has not been validated")]
    Unvalidated,
    #[error("channel fails completeness: residual {residual:.3e} exceeds {tolerance:.1e}")]
    NotCptp { residual: f64, tolerance: f64 },
    #[error("dimension mismatch: channel acts on C^{expected}, input has dimension {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid Kraus set: {0}")]
    InvalidKraus(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("malformed channel file: {0}")]
    Json(String),
    #[error("ragged matrix in entry {op}: {detail}")]
    Ragged { op: usize, detail: String },
    #[error("{kappa} Kraus operators exceed d^2 = {}", dim * dim)]
    TooManyKraus { kappa: usize, dim: usize },
    #[error("Kraus list is empty")]
    EmptyKraus,
    #[error("bad dimension: {0}")]
    Dimension(String),
    #[error("cannot evaluate '{text}': {message}")]
    Expression { text: String, message: String },
    #[error("state {index}: {message}")]
    State { index: usize, message: String },
}

/// Which completeness tolerance a channel meets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValidationTier {
    Strict,
    Lenient,
    Failed,
}

impl ValidationTier {
    pub fn classify(residual: f64) -> Self {
        if residual <= STRICT_TOL {
            Self::Strict
        } else if residual <= LENIENT_TOL {
            Self::Lenient
        } else {
            Self::Failed
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelStatus {
    Unvalidated,
    Validated {
        tolerance: f64,
    },
    /// Analysis continues past a failed completeness check.
    Overridden,
}

/// Outcome of the completeness check `Σ A_i†A_i = I`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub tolerance: f64,
    pub tier: ValidationTier,
    pub max_residual: f64,
    /// Zero-based `(row, col)` of the largest residual entry.
    pub worst_entry: (usize, usize),
    /// `Σ A_i†A_i − I`, entry by entry.
    pub residual: ComplexMatrix,
}

#[derive(Debug, Clone)]
pub struct KrausChannel {
    name: String,
    dim: usize,
    kraus: Vec<ComplexMatrix>,
    completeness_residual: f64,
    status: ChannelStatus,
}

impl KrausChannel {
    /// Builds an unvalidated channel. All operators must be `d×d` and
    /// `1 ≤ κ ≤ d²`.
    pub fn new(name: impl Into<String>, kraus: Vec<ComplexMatrix>) -> Result<Self, ChannelError> {
        let Some(first) = kraus.first() else {
            return Err(ChannelError::InvalidKraus("empty Kraus list".into()));
        };
        let dim = first.rows();
        if dim == 0 {
            return Err(ChannelError::InvalidKraus("zero-dimensional operators".into()));
        }
        if let Some(bad) = kraus.iter().position(|a| a.rows() != dim || a.cols() != dim) {
            return Err(ChannelError::InvalidKraus(format!(
                "operator {bad} is {}x{}, expected {dim}x{dim}",
                kraus[bad].rows(),
                kraus[bad].cols()
            )));
        }
        if kraus.len() > dim * dim {
            return Err(ChannelError::InvalidKraus(format!(
                "{} operators exceed d^2 = {}",
                kraus.len(),
                dim * dim
            )));
        }
        if kraus.iter().any(|a| !a.is_finite()) {
            return Err(NumericsError::NonFinite.into());
        }
        let mut ch = Self {
            name: name.into(),
            dim,
            kraus,
            completeness_residual: 0.0,
            status: ChannelStatus::Unvalidated,
        };
        ch.completeness_residual = (&ch.completeness_matrix() - &ComplexMatrix::identity(dim)).norm_max();
        Ok(ch)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kappa(&self) -> usize {
        self.kraus.len()
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    /// `‖Σ A_i†A_i − I‖_max`, computed at construction.
    pub fn completeness_residual(&self) -> f64 {
        self.completeness_residual
    }

    pub fn status(&self) -> ChannelStatus {
        self.status
    }

    /// True only for channels that passed a completeness check.
    pub fn is_validated(&self) -> bool {
        matches!(self.status, ChannelStatus::Validated { .. })
    }

    /// `Σ A_i†A_i`
    pub fn completeness_matrix(&self) -> ComplexMatrix {
        self.kraus
            .iter()
            .fold(ComplexMatrix::zeros(self.dim, self.dim), |acc, a| &acc + &(&a.adjoint() * a))
    }

    pub fn mark_validated(&mut self, report: &ValidationReport) -> Result<(), ChannelError> {
        if !report.passed {
            return Err(ChannelError::NotCptp {
                residual: report.max_residual,
                tolerance: report.tolerance,
            });
        }
        self.status = ChannelStatus::Validated {
            tolerance: report.tolerance,
        };
        Ok(())
    }

    /// Validates at `tol`, consuming the channel.
    pub fn validated(mut self, tol: f64) -> Result<Self, ChannelError> {
        let report = validate_completeness(&self, tol);
        self.mark_validated(&report)?;
        Ok(self)
    }

    /// Lets application proceed without a passing completeness check.
    pub fn override_validation(&mut self) {
        self.status = ChannelStatus::Overridden;
    }

    fn require_usable(&self) -> Result<(), ChannelError> {
        match self.status {
            ChannelStatus::Unvalidated => Err(ChannelError::Unvalidated),
            _ => Ok(()),
        }
    }

    fn require_dim(&self, found: usize) -> Result<(), ChannelError> {
        if found != self.dim {
            return Err(ChannelError::DimensionMismatch { expected: self.dim, found });
        }
        Ok(())
    }
}

/// Checks `Σ A_i†A_i = I` entrywise. A failure is a report outcome, not an error.
pub fn validate_completeness(ch: &KrausChannel, tol: f64) -> ValidationReport {
    let residual = &ch.completeness_matrix() - &ComplexMatrix::identity(ch.dim);
    let max_residual = residual.norm_max();
    ValidationReport {
        passed: max_residual <= tol,
        tolerance: tol,
        tier: ValidationTier::classify(max_residual),
        max_residual,
        worst_entry: residual.argmax_abs(),
        residual,
    }
}

/// `ℰ(ρ) = Σ A_i ρ A_i†`. Pure inputs go through `Σ (A_i|ψ⟩)(A_i|ψ⟩)†`.
pub fn apply(ch: &KrausChannel, state: &QuantumState) -> Result<ComplexMatrix, ChannelError> {
    ch.require_usable()?;
    ch.require_dim(state.dim())?;
    match state {
        QuantumState::Pure(psi) => Ok(ch.kraus.iter().fold(ComplexMatrix::zeros(ch.dim, ch.dim), |acc, a| {
            let v = a.mul_vec(psi);
            &acc + &ComplexMatrix::outer(&v, &v)
        })),
        QuantumState::Mixed(rho) => apply_operator(ch, rho),
    }
}

/// Applies the channel's linear extension to an arbitrary `d×d` operator.
pub fn apply_operator(ch: &KrausChannel, x: &ComplexMatrix) -> Result<ComplexMatrix, ChannelError> {
    ch.require_usable()?;
    ch.require_dim(x.rows())?;
    ch.require_dim(x.cols())?;
    Ok(ch
        .kraus
        .iter()
        .fold(ComplexMatrix::zeros(ch.dim, ch.dim), |acc, a| &acc + &(&(a * x) * &a.adjoint())))
}

/// `L = Σ conj(A_i) ⊗ A_i`, so that `vec(ℰ(ρ)) = L vec(ρ)` (column stacking).
pub fn superoperator_matrix(ch: &KrausChannel) -> Result<ComplexMatrix, ChannelError> {
    ch.require_usable()?;
    let n = ch.dim * ch.dim;
    Ok(ch.kraus.iter().fold(ComplexMatrix::zeros(n, n), |acc, a| &acc + &a.conj().kron(a)))
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;

    fn identity_channel(d: usize) -> KrausChannel {
        KrausChannel::new("id", vec![ComplexMatrix::identity(d)])
            .unwrap()
            .validated(STRICT_TOL)
            .unwrap()
    }

    #[test]
    fn identity_channel_is_noop() {
        let ch = identity_channel(3);
        let rho = QuantumState::maximally_mixed(3);
        let out = apply(&ch, &rho).unwrap();
        assert!((&out - &rho.density()).norm_max() < 1e-15);
    }

    #[test]
    fn identity_superoperator() {
        let l = superoperator_matrix(&identity_channel(2)).unwrap();
        assert_eq!(l, ComplexMatrix::identity(4));
    }

    #[test]
    fn unitary_superoperator_is_kronecker() {
        let i = Complex64::new(0.0, 1.0);
        let one = Complex64::new(1.0, 0.0);
        let u = ComplexMatrix::diag(&[one, i]);
        let ch = KrausChannel::new("phase", vec![u.clone()]).unwrap().validated(STRICT_TOL).unwrap();
        let l = superoperator_matrix(&ch).unwrap();
        let want = ComplexMatrix::diag(&[one, i, -i, one]);
        assert_eq!(l, want);
        assert_eq!(l, u.conj().kron(&u));
    }

    #[test]
    fn unvalidated_channel_cannot_be_applied() {
        let ch = KrausChannel::new("id", vec![ComplexMatrix::identity(2)]).unwrap();
        assert_eq!(apply(&ch, &QuantumState::basis(2, 0)), Err(ChannelError::Unvalidated));
        assert!(superoperator_matrix(&ch).is_err());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let ch = identity_channel(2);
        assert!(matches!(
            apply(&ch, &QuantumState::basis(3, 0)),
            Err(ChannelError::DimensionMismatch { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn failed_validation_refuses_to_mark() {
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        let ch = KrausChannel::new("lossy", vec![half]).unwrap();
        let report = validate_completeness(&ch, STRICT_TOL);
        assert!(!report.passed);
        assert_eq!(report.tier, ValidationTier::Failed);
        assert!((report.max_residual - 0.75).abs() < 1e-15);
        assert!(ch.clone().validated(STRICT_TOL).is_err());
    }

    #[test]
    fn tiers() {
        assert_eq!(ValidationTier::classify(1e-12), ValidationTier::Strict);
        assert_eq!(ValidationTier::classify(1e-5), ValidationTier::Lenient);
        assert_eq!(ValidationTier::classify(0.1), ValidationTier::Failed);
    }

    #[test]
    fn rejects_mixed_operator_sizes() {
        let r = KrausChannel::new("x", vec![ComplexMatrix::identity(2), ComplexMatrix::identity(3)]);
        assert!(matches!(r, Err(ChannelError::InvalidKraus(_))));
    }
}
