//! One-sided (Hestenes) Jacobi SVD for small dense complex matrices.
//!
//! Columns of the working copy are orthogonalized pairwise by complex plane
//! rotations; the accumulated rotations form the right singular vectors.

use num_complex::Complex64;

use super::matrix::{inner, norm, CVector, ComplexMatrix};
use super::NumericsError;

const MAX_SWEEPS: usize = 80;

/// Right-side singular value decomposition `A V = [σ_1 u_1, …, σ_n u_n]`.
#[derive(Debug, Clone)]
pub struct Svd {
    /// Descending, one per column of the input.
    pub singular_values: Vec<f64>,
    /// Right singular vectors, ordered like `singular_values`.
    pub right_vectors: Vec<CVector>,
}

pub fn svd(a: &ComplexMatrix) -> Result<Svd, NumericsError> {
    let n = a.cols();
    let mut work = a.columns();
    let mut v: Vec<CVector> = (0..n).map(|j| super::matrix::basis_vector(n, j)).collect();

    let ortho_tol = (a.rows().max(4) as f64) * f64::EPSILON;
    // Columns below this squared norm are numerically zero and left alone.
    let negligible = (a.norm_fro() * f64::EPSILON).powi(2).max(f64::MIN_POSITIVE);
    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = norm(&work[p]).powi(2);
                let beta = norm(&work[q]).powi(2);
                let gamma = inner(&work[p], &work[q]);
                let g = gamma.norm();
                if g == 0.0 || alpha.min(beta) <= negligible || g <= ortho_tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = (gamma / g).conj();
                let (c, s) = jacobi_cs(alpha, beta, g);
                rotate_pair(&mut work, p, q, c, s, phase);
                rotate_pair(&mut v, p, q, c, s, phase);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(NumericsError::NoConvergence {
            routine: "jacobi svd",
            iterations: MAX_SWEEPS,
        });
    }

    let mut order: Vec<(f64, usize)> = work.iter().enumerate().map(|(j, c)| (norm(c), j)).collect();
    order.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    Ok(Svd {
        singular_values: order.iter().map(|&(s, _)| s).collect(),
        right_vectors: order.iter().map(|&(_, j)| v[j].clone()).collect(),
    })
}

pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>, NumericsError> {
    Ok(svd(a)?.singular_values)
}

/// Cosine and sine of the real symmetric Schur rotation for
/// `[[alpha, g], [g, beta]]`, with `g > 0`.
pub(crate) fn jacobi_cs(alpha: f64, beta: f64, g: f64) -> (f64, f64) {
    let zeta = (beta - alpha) / (2.0 * g);
    let t = if zeta >= 0.0 {
        1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
    } else {
        -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, c * t)
}

/// `[x_p, x_q] <- [c x_p - s e x_q, s x_p + c e x_q]` where `e` is a unit phase.
fn rotate_pair(cols: &mut [CVector], p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
    let (left, right) = cols.split_at_mut(q);
    let xp = &mut left[p];
    let xq = &mut right[0];
    for (a, b) in xp.iter_mut().zip(xq.iter_mut()) {
        let eb = phase * *b;
        let na = *a * c - eb * s;
        let nb = *a * s + eb * c;
        *a = na;
        *b = nb;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_singular_values_sorted() {
        let m = ComplexMatrix::diag(&[Complex64::new(0.5, 0.0), Complex64::new(0.0, 2.0), Complex64::new(-1.0, 0.0)]);
        let s = singular_values(&m).unwrap();
        assert!((s[0] - 2.0).abs() < 1e-15);
        assert!((s[1] - 1.0).abs() < 1e-15);
        assert!((s[2] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn right_vectors_reproduce_singular_values() {
        let m = ComplexMatrix::from_vec(
            2,
            3,
            vec![
                Complex64::new(1.0, 1.0),
                Complex64::new(0.0, 2.0),
                Complex64::new(-1.0, 0.0),
                Complex64::new(0.3, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(2.0, -1.0),
            ],
        )
        .unwrap();
        let d = svd(&m).unwrap();
        assert_eq!(d.singular_values.len(), 3);
        for (s, v) in d.singular_values.iter().zip(&d.right_vectors) {
            assert!((norm(v) - 1.0).abs() < 1e-13);
            assert!((norm(&m.mul_vec(v)) - s).abs() < 1e-12);
        }
        // 2x3 has a one-dimensional kernel.
        assert!(d.singular_values[2] < 1e-14);
    }
}
