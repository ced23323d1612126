use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::eigen::hermitian_eigen;
use super::matrix::{basis_vector, inner, norm, normalized, CVector, ComplexMatrix};
use super::svd::svd;
use super::{NumericsError, ABS_FLOOR};

/// Orthonormal basis of a subspace of `C^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<CVector>,
}

impl Subspace {
    pub fn empty(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: (0..ambient_dim).map(|k| basis_vector(ambient_dim, k)).collect(),
        }
    }

    /// Wraps vectors that are already orthonormal to 1e-10.
    pub fn from_orthonormal(ambient_dim: usize, basis: Vec<CVector>) -> Result<Self, NumericsError> {
        if basis.iter().any(|b| b.len() != ambient_dim) {
            return Err(NumericsError::DimensionMismatch {
                expected: ambient_dim,
                found: basis.iter().map(Vec::len).find(|&l| l != ambient_dim).unwrap_or(0),
            });
        }
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate().skip(i) {
                let target = if i == j { 1.0 } else { 0.0 };
                if (inner(a, b) - target).norm() > 1e-10 {
                    return Err(NumericsError::NotOrthonormal);
                }
            }
        }
        Ok(Self { ambient_dim, basis })
    }

    /// Orthonormal basis of the span of arbitrary vectors, dropping directions
    /// whose residual norm falls below `tol`.
    pub fn span(ambient_dim: usize, vectors: &[CVector], tol: f64) -> Self {
        let mut basis: Vec<CVector> = Vec::new();
        for v in vectors {
            let mut r = v.clone();
            // two passes of Gram-Schmidt
            for _ in 0..2 {
                for b in &basis {
                    let c = inner(b, &r);
                    for (x, y) in r.iter_mut().zip(b) {
                        *x -= c * y;
                    }
                }
            }
            if norm(&r) > tol {
                if let Some(u) = normalized(&r) {
                    basis.push(u);
                }
            }
        }
        Self { ambient_dim, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[CVector] {
        &self.basis
    }

    pub fn into_basis(self) -> Vec<CVector> {
        self.basis
    }

    /// Matrix with the basis vectors as columns.
    pub fn basis_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_columns(self.ambient_dim, &self.basis)
    }

    pub fn projector(&self) -> ComplexMatrix {
        let mut p = ComplexMatrix::zeros(self.ambient_dim, self.ambient_dim);
        for b in &self.basis {
            p = &p + &ComplexMatrix::outer(b, b);
        }
        p
    }

    /// Orthogonal projection of `v` onto the subspace.
    pub fn project(&self, v: &[Complex64]) -> CVector {
        let mut out = vec![Complex64::new(0.0, 0.0); self.ambient_dim];
        for b in &self.basis {
            let c = inner(b, v);
            for (o, x) in out.iter_mut().zip(b) {
                *o += c * x;
            }
        }
        out
    }

    /// Euclidean distance from `v` to the subspace.
    pub fn distance(&self, v: &[Complex64]) -> f64 {
        let p = self.project(v);
        let r: CVector = v.iter().zip(&p).map(|(a, b)| a - b).collect();
        norm(&r)
    }

    pub fn orthogonal_complement(&self) -> Self {
        let mut candidates = self.basis.clone();
        candidates.extend((0..self.ambient_dim).map(|k| basis_vector(self.ambient_dim, k)));
        let full = Self::span(self.ambient_dim, &candidates, 1e-8);
        Self {
            ambient_dim: self.ambient_dim,
            basis: full.basis[self.dim()..].to_vec(),
        }
    }

    /// Deterministic basis of the same subspace: repeatedly project the
    /// standard basis vector with the largest remaining component (lowest
    /// index on ties) and orthogonalize. Each resulting vector has a real
    /// positive entry at its pivot, which fixes the phase.
    pub fn canonical(&self) -> Self {
        let n = self.ambient_dim;
        let mut residuals: Vec<CVector> = (0..n).map(|k| self.project(&basis_vector(n, k))).collect();
        let mut chosen: Vec<CVector> = Vec::with_capacity(self.dim());
        for _ in 0..self.dim() {
            let norms: Vec<f64> = residuals.iter().map(|r| norm(r)).collect();
            let best = norms.iter().cloned().fold(0.0, f64::max);
            let Some(pivot) = norms.iter().position(|&x| x >= best - 1e-9 * best.max(1.0)) else {
                break;
            };
            if best <= 1e-300 {
                break;
            }
            let q: CVector = residuals[pivot].iter().map(|z| z / norms[pivot]).collect();
            for r in residuals.iter_mut() {
                let c = inner(&q, r);
                for (x, y) in r.iter_mut().zip(&q) {
                    *x -= c * y;
                }
            }
            chosen.push(q);
        }
        // re-orthonormalize against rounding
        let tidy = Self::span(n, &chosen, 1e-300);
        if tidy.dim() == chosen.len() {
            tidy
        } else {
            Self {
                ambient_dim: n,
                basis: chosen,
            }
        }
    }

    /// Largest sine of the principal angles between two equal-dimension subspaces
    /// (0 when they coincide). Unequal dimensions return 1.
    pub fn max_angle_sine(&self, other: &Subspace) -> f64 {
        if self.dim() != other.dim() || self.ambient_dim != other.ambient_dim {
            return 1.0;
        }
        self.basis.iter().map(|b| other.distance(b)).fold(0.0, f64::max)
    }
}

/// Numerical kernel `{v : ‖Mv‖ ≤ tol·‖M‖}`, floored at an absolute 1e-12.
pub fn null_space(m: &ComplexMatrix, tol: f64) -> Result<Subspace, NumericsError> {
    let threshold = (tol * m.norm_op()).max(ABS_FLOOR);
    null_space_abs(m, threshold)
}

/// Kernel with an absolute singular-value threshold.
pub(crate) fn null_space_abs(m: &ComplexMatrix, threshold: f64) -> Result<Subspace, NumericsError> {
    let d = svd(m)?;
    let basis = d
        .singular_values
        .iter()
        .zip(d.right_vectors)
        .filter(|(s, _)| **s <= threshold)
        .map(|(_, v)| v)
        .collect();
    Ok(Subspace {
        ambient_dim: m.cols(),
        basis,
    })
}

/// Intersection by principal angles: the singular values of `B_V† B_U` are
/// the cosines between the subspaces, and the `U`-side principal vectors with
/// cosine at least `1 - tol` span the intersection.
pub fn subspace_intersection(u: &Subspace, v: &Subspace, tol: f64) -> Result<Subspace, NumericsError> {
    if u.ambient_dim != v.ambient_dim {
        return Err(NumericsError::DimensionMismatch {
            expected: u.ambient_dim,
            found: v.ambient_dim,
        });
    }
    let n = u.ambient_dim;
    if u.is_empty() || v.is_empty() {
        return Ok(Subspace::empty(n));
    }
    let bu = u.basis_matrix();
    let bv = v.basis_matrix();
    let cosines = &bv.adjoint() * &bu;
    let d = svd(&cosines)?;
    let mut basis = Vec::new();
    for (s, y) in d.singular_values.iter().zip(&d.right_vectors) {
        if *s >= 1.0 - tol {
            basis.push(bu.mul_vec(y));
        }
    }
    Ok(Subspace::span(n, &basis, 0.5))
}

/// Orthogonal projector onto the eigenvectors of a PSD matrix whose
/// eigenvalues exceed `tol·tr(P)`.
pub fn support_projector(p: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix, NumericsError> {
    if !p.is_square() {
        return Err(NumericsError::NotSquare {
            rows: p.rows(),
            cols: p.cols(),
        });
    }
    let scale = p.norm_max().max(1.0);
    let defect = p.hermiticity_defect();
    if defect > 1e-10 * scale {
        return Err(NumericsError::NotHermitian { defect });
    }
    let trace = p.trace().re;
    let (values, vectors) = hermitian_eigen(p)?;
    let floor = trace.abs().max(1.0);
    if let Some(&lowest) = values.first() {
        if lowest < -100.0 * tol * floor {
            return Err(NumericsError::NotPositive { eigenvalue: lowest });
        }
    }
    let cut = (tol * trace).max(ABS_FLOOR);
    let kept: Vec<CVector> = values.iter().zip(vectors).filter(|(l, _)| **l > cut).map(|(_, v)| v).collect();
    Ok(Subspace {
        ambient_dim: p.rows(),
        basis: kept,
    }
    .projector())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, k: usize) -> CVector {
        basis_vector(n, k)
    }

    #[test]
    fn null_space_of_zero_and_identity() {
        assert_eq!(null_space(&ComplexMatrix::zeros(2, 2), 1e-9).unwrap().dim(), 2);
        assert_eq!(null_space(&ComplexMatrix::identity(3), 1e-9).unwrap().dim(), 0);
    }

    #[test]
    fn null_space_of_rank_one_projector_like() {
        let m = ComplexMatrix::from_real(3, 3, &[1.0, 0.0, -1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 1.0]);
        let ns = null_space(&m, 1e-9).unwrap();
        assert_eq!(ns.dim(), 2);
        for v in ns.basis() {
            assert!(norm(&m.mul_vec(v)) < 1e-14);
        }
        let s = 0.5f64.sqrt();
        let expected = [
            vec![Complex64::new(s, 0.0), Complex64::new(0.0, 0.0), Complex64::new(s, 0.0)],
            e(3, 1),
        ];
        for x in &expected {
            assert!(ns.distance(x) < 1e-12);
        }
    }

    #[test]
    fn intersections_of_coordinate_spans() {
        let e1 = Subspace::from_orthonormal(3, vec![e(3, 0)]).unwrap();
        let e2 = Subspace::from_orthonormal(3, vec![e(3, 1)]).unwrap();
        assert_eq!(subspace_intersection(&e1, &e1, 1e-8).unwrap().dim(), 1);
        assert_eq!(subspace_intersection(&e1, &e2, 1e-8).unwrap().dim(), 0);

        let u = Subspace::from_orthonormal(3, vec![e(3, 0), e(3, 1)]).unwrap();
        let v = Subspace::from_orthonormal(3, vec![e(3, 1), e(3, 2)]).unwrap();
        let w = subspace_intersection(&u, &v, 1e-8).unwrap();
        assert_eq!(w.dim(), 1);
        let x = &w.basis()[0];
        assert!(u.distance(x) < 1e-12 && v.distance(x) < 1e-12);
        assert!((x[1].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mismatched_ambient_dimension() {
        let a = Subspace::full(2);
        let b = Subspace::full(3);
        assert!(subspace_intersection(&a, &b, 1e-8).is_err());
    }

    #[test]
    fn support_projectors() {
        let p = ComplexMatrix::outer(&e(2, 0), &e(2, 0));
        assert!((&support_projector(&p, 1e-9).unwrap() - &p).norm_max() < 1e-14);

        let half = ComplexMatrix::identity(2).scale_real(0.5);
        let id = ComplexMatrix::identity(2);
        assert!((&support_projector(&half, 1e-9).unwrap() - &id).norm_max() < 1e-14);

        let d = ComplexMatrix::from_real(3, 3, &[0.7, 0.0, 0.0, 0.0, 0.3, 0.0, 0.0, 0.0, 0.0]);
        let want = ComplexMatrix::from_real(3, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        assert!((&support_projector(&d, 1e-9).unwrap() - &want).norm_max() < 1e-14);
    }

    #[test]
    fn support_projector_rejects_bad_input() {
        let nh = ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 0.0, 0.0]);
        assert!(matches!(support_projector(&nh, 1e-9), Err(NumericsError::NotHermitian { .. })));
        let neg = ComplexMatrix::from_real(2, 2, &[1.5, 0.0, 0.0, -0.5]);
        assert!(matches!(support_projector(&neg, 1e-9), Err(NumericsError::NotPositive { .. })));
    }

    #[test]
    fn canonical_basis_is_pivoted_on_coordinates() {
        let s = 0.5f64.sqrt();
        // rotated basis of span{e1, e4}
        let a = vec![
            Complex64::new(s, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, s),
        ];
        let b = vec![
            Complex64::new(s, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, -s),
        ];
        let sub = Subspace::from_orthonormal(4, vec![a, b]).unwrap().canonical();
        assert!((sub.basis()[0][0] - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        assert!((sub.basis()[1][3] - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn complement_dimensions_add_up() {
        let u = Subspace::span(4, &[e(4, 0), e(4, 2)], 1e-12);
        let c = u.orthogonal_complement();
        assert_eq!(c.dim(), 2);
        for x in c.basis() {
            assert!(u.project(x).iter().all(|z| z.norm() < 1e-14));
        }
    }
}
