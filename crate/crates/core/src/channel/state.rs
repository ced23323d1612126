use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ChannelError;
use crate::numerics::{basis_vector, hermitian_eigen, norm, normalized, CVector, ComplexMatrix};

const STATE_TOL: f64 = 1e-10;

/// A pure state vector or a density matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuantumState {
    Pure(CVector),
    Mixed(ComplexMatrix),
}

impl QuantumState {
    /// Unit vector state; the norm must be 1 to within 1e-10.
    pub fn pure(v: CVector) -> Result<Self, ChannelError> {
        let n = norm(&v);
        if (n - 1.0).abs() > STATE_TOL {
            return Err(ChannelError::InvalidState(format!("pure state has norm {n}")));
        }
        Ok(Self::Pure(v))
    }

    /// Normalizes `v` first; fails only for the zero vector.
    pub fn pure_normalized(v: &[Complex64]) -> Result<Self, ChannelError> {
        normalized(v)
            .map(Self::Pure)
            .ok_or_else(|| ChannelError::InvalidState("zero vector".into()))
    }

    /// Density matrix: Hermitian, unit trace and PSD, each to 1e-10.
    pub fn mixed(rho: ComplexMatrix) -> Result<Self, ChannelError> {
        if !rho.is_square() {
            return Err(ChannelError::InvalidState("density matrix is not square".into()));
        }
        let defect = rho.hermiticity_defect();
        if defect > STATE_TOL {
            return Err(ChannelError::InvalidState(format!("density matrix not Hermitian ({defect:.2e})")));
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(ChannelError::InvalidState(format!("density matrix has trace {tr}")));
        }
        let (values, _) = hermitian_eigen(&rho)?;
        if let Some(&low) = values.first() {
            if low < -STATE_TOL {
                return Err(ChannelError::InvalidState(format!("density matrix eigenvalue {low:.3e} < 0")));
            }
        }
        Ok(Self::Mixed(rho))
    }

    /// Computational basis state `|k⟩` in dimension `d`.
    pub fn basis(d: usize, k: usize) -> Self {
        Self::Pure(basis_vector(d, k))
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self::Mixed(ComplexMatrix::identity(d).scale_real(1.0 / d as f64))
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Pure(v) => v.len(),
            Self::Mixed(m) => m.rows(),
        }
    }

    pub fn as_pure(&self) -> Option<&CVector> {
        match self {
            Self::Pure(v) => Some(v),
            Self::Mixed(_) => None,
        }
    }

    pub fn density(&self) -> ComplexMatrix {
        match self {
            Self::Pure(v) => ComplexMatrix::outer(v, v),
            Self::Mixed(m) => m.clone(),
        }
    }

    /// `self ⊗ other`, staying pure when both factors are.
    pub fn tensor(&self, other: &Self) -> Self {
        match (self, other) {
            (Self::Pure(a), Self::Pure(b)) => Self::Pure(a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()),
            _ => Self::Mixed(self.density().kron(&other.density())),
        }
    }
}
