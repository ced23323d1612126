//! Dense complex linear algebra for small matrices (dimension ≤ 64).
//!
//! Everything here is a pure function of its inputs. Tolerances are relative
//! to the operator norm of the matrix involved, with an absolute floor of
//! [`ABS_FLOOR`].

mod eigen;
mod matrix;
mod subspace;
mod svd;

use thiserror::Error;

pub use eigen::{cmp_complex, eigen_decompose, eigenvalues, hermitian_eigen, Eigenpair};
pub use matrix::{basis_vector, inner, norm, normalized, CVector, ComplexMatrix};
pub(crate) use subspace::null_space_abs;
pub use subspace::{null_space, subspace_intersection, support_projector, Subspace};
pub use svd::{singular_values, svd, Svd};

/// Default eigenvalue clustering tolerance, relative to `‖M‖`.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-7;
/// Residual level (relative to `‖M‖`) at which a vector counts as an eigenvector.
pub const EIGEN_RESIDUAL_TOL: f64 = 1e-9;
/// Principal-angle cosine threshold is `1 - DEFAULT_INTERSECTION_TOL`.
pub const DEFAULT_INTERSECTION_TOL: f64 = 1e-8;
/// Absolute floor for every relative tolerance.
pub const ABS_FLOOR: f64 = 1e-12;
/// Largest supported matrix dimension.
pub const MAX_DIM: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("bad shape: {0}")]
    Shape(String),
    #[error("matrix contains NaN or infinite entries")]
    NonFinite,
    #[error("basis is not orthonormal")]
    NotOrthonormal,
    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },
    #[error("matrix has a materially negative eigenvalue {eigenvalue:.3e}")]
    NotPositive { eigenvalue: f64 },
    #[error("{routine} did not converge after {iterations} iterations")]
    NoConvergence { routine: &'static str, iterations: usize },
}
