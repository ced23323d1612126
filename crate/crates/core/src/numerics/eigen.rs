use std::cmp::Ordering;

use num_complex::Complex64;

use super::matrix::{inner, norm, CVector, ComplexMatrix};
use super::subspace::{null_space_abs, Subspace};
use super::svd::{jacobi_cs, svd};
use super::{NumericsError, ABS_FLOOR, EIGEN_RESIDUAL_TOL};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// An eigenvalue together with its geometric eigenspace.
#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub value: Complex64,
    pub space: Subspace,
}

/// Eigenvalues and geometric eigenspaces of a square matrix.
///
/// Eigenvalues come from shifted QR on the Hessenberg form and are clustered
/// with `tol` relative to `‖M‖`. Each cluster's eigenspace is the numerical
/// kernel of `M - λI`; defective directions simply do not show up. Pairs are
/// returned ordered by real part, then imaginary part.
pub fn eigen_decompose(m: &ComplexMatrix, tol: f64) -> Result<Vec<Eigenpair>, NumericsError> {
    if !m.is_square() {
        return Err(NumericsError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let scale = m.norm_op().max(ABS_FLOOR);
    let cluster_tol = (tol * scale).max(ABS_FLOOR);
    let values = eigenvalues(m)?;
    let centers = cluster(&values, cluster_tol);

    let mut pairs = Vec::with_capacity(centers.len());
    for center in centers {
        let (value, space) = eigenspace(m, center, scale)?;
        if space.dim() > 0 {
            pairs.push(Eigenpair { value, space });
        }
    }
    pairs.sort_by(|a, b| cmp_complex(a.value, b.value, cluster_tol));
    Ok(pairs)
}

/// Kernel of `M - λI` at residual level `EIGEN_RESIDUAL_TOL·‖M‖`. When the
/// estimate is too coarse to expose a kernel, it is refined by Rayleigh
/// quotients of the least singular vector.
fn eigenspace(m: &ComplexMatrix, estimate: Complex64, scale: f64) -> Result<(Complex64, Subspace), NumericsError> {
    let threshold = (EIGEN_RESIDUAL_TOL * scale).max(ABS_FLOOR);
    let n = m.rows();
    let mut lambda = estimate;
    for _ in 0..4 {
        let shifted = shift_diagonal(m, -lambda);
        let space = null_space_abs(&shifted, threshold)?;
        if space.dim() > 0 {
            return Ok((lambda, space));
        }
        let d = svd(&shifted)?;
        let v = &d.right_vectors[n - 1];
        lambda = inner(v, &m.mul_vec(v));
    }
    Ok((lambda, Subspace::empty(n)))
}

fn shift_diagonal(m: &ComplexMatrix, shift: Complex64) -> ComplexMatrix {
    let mut out = m.clone();
    for i in 0..m.rows() {
        out[(i, i)] += shift;
    }
    out
}

/// Single-linkage clustering; returns cluster means. Clusters whose means
/// land within `tol` of each other are merged until all means are separated.
fn cluster(values: &[Complex64], tol: f64) -> Vec<Complex64> {
    let mut groups: Vec<Vec<Complex64>> = Vec::new();
    for &z in values {
        let hits: Vec<usize> = groups
            .iter()
            .enumerate()
            .filter(|(_, g)| g.iter().any(|w| (w - z).norm() <= tol))
            .map(|(i, _)| i)
            .collect();
        match hits.split_first() {
            None => groups.push(vec![z]),
            Some((&first, rest)) => {
                for &i in rest.iter().rev() {
                    let g = groups.remove(i);
                    groups[first].extend(g);
                }
                groups[first].push(z);
            }
        }
    }
    loop {
        let means: Vec<Complex64> = groups.iter().map(|g| g.iter().sum::<Complex64>() / g.len() as f64).collect();
        let close = (0..means.len())
            .flat_map(|i| ((i + 1)..means.len()).map(move |j| (i, j)))
            .find(|&(i, j)| (means[i] - means[j]).norm() <= tol);
        match close {
            Some((i, j)) => {
                let g = groups.remove(j);
                groups[i].extend(g);
            }
            None => return means,
        }
    }
}

/// Orders complex numbers by real part, then imaginary part, treating
/// components within `tol` as equal.
pub fn cmp_complex(a: Complex64, b: Complex64, tol: f64) -> Ordering {
    let by = |x: f64, y: f64| {
        if (x - y).abs() <= tol {
            Ordering::Equal
        } else {
            x.total_cmp(&y)
        }
    };
    by(a.re, b.re).then_with(|| by(a.im, b.im))
}

/// All eigenvalues (with algebraic multiplicity) of a square matrix.
pub fn eigenvalues(m: &ComplexMatrix) -> Result<Vec<Complex64>, NumericsError> {
    if !m.is_square() {
        return Err(NumericsError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut h = hessenberg(m);
    let fallback_scale = h.norm_fro().max(f64::MIN_POSITIVE);
    let max_iterations = 100 * n.max(4);
    let mut values = vec![ZERO; n];
    let mut hi = n - 1;
    let mut stalled = 0usize;
    let mut total = 0usize;

    while hi > 0 {
        let mut lo = hi;
        while lo > 0 {
            let mut s = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if s == 0.0 {
                s = fallback_scale;
            }
            if h[(lo, lo - 1)].norm() <= f64::EPSILON * s {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            values[hi] = h[(hi, hi)];
            hi -= 1;
            stalled = 0;
            continue;
        }

        stalled += 1;
        total += 1;
        if total > max_iterations {
            return Err(NumericsError::NoConvergence {
                routine: "hessenberg qr",
                iterations: total,
            });
        }
        let shift = if stalled.is_multiple_of(11) {
            // exceptional shift to break cycles
            h[(hi, hi)] + Complex64::new(0.75, 0.5) * h[(hi, hi - 1)].norm()
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        qr_step(&mut h, lo, hi, shift);
    }
    values[0] = h[(0, 0)];
    Ok(values)
}

/// Unitary reduction to upper Hessenberg form by Householder reflections.
fn hessenberg(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.rows();
    let mut h = m.clone();
    for k in 0..n.saturating_sub(2) {
        let x: CVector = ((k + 1)..n).map(|i| h[(i, k)]).collect();
        let xn = norm(&x);
        if xn == 0.0 {
            continue;
        }
        let phase = if x[0].norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x[0] / x[0].norm()
        };
        let mut v = x;
        v[0] += phase * xn;
        let vn = norm(&v);
        if vn == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vn;
        }
        for j in 0..n {
            let s: Complex64 = v.iter().enumerate().map(|(i, vi)| vi.conj() * h[(k + 1 + i, j)]).sum();
            for (i, vi) in v.iter().enumerate() {
                h[(k + 1 + i, j)] -= vi * s * 2.0;
            }
        }
        for r in 0..n {
            let s: Complex64 = v.iter().enumerate().map(|(i, vi)| h[(r, k + 1 + i)] * vi).sum();
            for (i, vi) in v.iter().enumerate() {
                h[(r, k + 1 + i)] -= s * vi.conj() * 2.0;
            }
        }
        for i in (k + 2)..n {
            h[(i, k)] = ZERO;
        }
    }
    h
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half_tr = (a + d) * 0.5;
    let disc = ((a - d) * (a - d) * 0.25 + b * c).sqrt();
    let mu1 = half_tr + disc;
    let mu2 = half_tr - disc;
    if (mu1 - d).norm() <= (mu2 - d).norm() {
        mu1
    } else {
        mu2
    }
}

/// Returns `(c, s)` with real `c` such that
/// `[[c, s], [-s̄, c]] · [a, b]ᵀ = [r, 0]ᵀ`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let an = a.norm();
    let r = an.hypot(b.norm());
    if r == 0.0 {
        (1.0, ZERO)
    } else if an == 0.0 {
        (0.0, Complex64::new(1.0, 0.0))
    } else {
        (an / r, (a / an) * b.conj() / r)
    }
}

/// One explicitly shifted QR step on the active block `lo..=hi`.
fn qr_step(h: &mut ComplexMatrix, lo: usize, hi: usize, shift: Complex64) {
    for i in lo..=hi {
        h[(i, i)] -= shift;
    }
    let mut rotations = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
        for j in k..=hi {
            let a = h[(k, j)];
            let b = h[(k + 1, j)];
            h[(k, j)] = a * c + s * b;
            h[(k + 1, j)] = -s.conj() * a + b * c;
        }
        rotations.push((c, s));
    }
    for (idx, k) in (lo..hi).enumerate() {
        let (c, s) = rotations[idx];
        for i in lo..=(k + 2).min(hi) {
            let a = h[(i, k)];
            let b = h[(i, k + 1)];
            h[(i, k)] = a * c + s.conj() * b;
            h[(i, k + 1)] = -s * a + b * c;
        }
    }
    for i in lo..=hi {
        h[(i, i)] += shift;
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi.
/// Returns ascending real eigenvalues and matching orthonormal eigenvectors.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<(Vec<f64>, Vec<CVector>), NumericsError> {
    if !m.is_square() {
        return Err(NumericsError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let total = a.norm_fro();
    const MAX_SWEEPS: usize = 60;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)].norm_sqr())
            .sum();
        if off.sqrt() <= 1e-15 * total || total == 0.0 {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let gamma = a[(p, q)];
                let g = gamma.norm();
                if g <= 1e-300 {
                    continue;
                }
                let phase = (gamma / g).conj();
                let (c, s) = jacobi_cs(a[(p, p)].re, a[(q, q)].re, g);
                // A <- A R, V <- V R with R = [[c, s], [-s e, c e]] on (p, q)
                for k in 0..n {
                    let (x, y) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = x * c - phase * y * s;
                    a[(k, q)] = x * s + phase * y * c;
                    let (x, y) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = x * c - phase * y * s;
                    v[(k, q)] = x * s + phase * y * c;
                }
                // A <- R† A
                let pc = phase.conj();
                for k in 0..n {
                    let (x, y) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = x * c - pc * y * s;
                    a[(q, k)] = x * s + pc * y * c;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
            }
        }
    }
    if !converged {
        return Err(NumericsError::NoConvergence {
            routine: "hermitian jacobi",
            iterations: MAX_SWEEPS,
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re).then(i.cmp(&j)));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = order.iter().map(|&i| v.column(i)).collect();
    Ok((values, vectors))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_has_single_full_eigenspace() {
        let pairs = eigen_decompose(&ComplexMatrix::identity(3), 1e-7).unwrap();
        assert_eq!(pairs.len(), 1);
        assert!((pairs[0].value - c(1.0, 0.0)).norm() < 1e-14);
        assert_eq!(pairs[0].space.dim(), 3);
    }

    #[test]
    fn diagonal_half_minus_half() {
        let m = ComplexMatrix::diag(&[c(0.5, 0.0), c(-0.5, 0.0)]);
        let pairs = eigen_decompose(&m, 1e-7).unwrap();
        assert_eq!(pairs.len(), 2);
        assert!((pairs[0].value - c(-0.5, 0.0)).norm() < 1e-14);
        assert!((pairs[1].value - c(0.5, 0.0)).norm() < 1e-14);
        assert!(pairs.iter().all(|p| p.space.dim() == 1));
    }

    #[test]
    fn rotation_has_complex_pair() {
        let m = ComplexMatrix::from_real(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let mut vals = eigenvalues(&m).unwrap();
        vals.sort_by(|a, b| cmp_complex(*a, *b, 1e-12));
        assert!((vals[0] - c(0.0, -1.0)).norm() < 1e-13);
        assert!((vals[1] - c(0.0, 1.0)).norm() < 1e-13);
    }

    #[test]
    fn jordan_block_keeps_only_geometric_eigenspace() {
        let m = ComplexMatrix::from_real(2, 2, &[2.0, 1.0, 0.0, 2.0]);
        let pairs = eigen_decompose(&m, 1e-7).unwrap();
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].space.dim(), 1);
        let v = &pairs[0].space.basis()[0];
        assert!(v[1].norm() < 1e-7);
    }

    #[test]
    fn non_square_is_rejected() {
        let m = ComplexMatrix::zeros(2, 3);
        assert!(matches!(eigen_decompose(&m, 1e-7), Err(NumericsError::NotSquare { .. })));
    }

    #[test]
    fn hermitian_jacobi_diagonalizes() {
        let m = ComplexMatrix::from_vec(
            3,
            3,
            vec![
                c(2.0, 0.0),
                c(0.0, 1.0),
                c(0.5, 0.5),
                c(0.0, -1.0),
                c(1.0, 0.0),
                c(0.0, 0.0),
                c(0.5, -0.5),
                c(0.0, 0.0),
                c(-1.0, 0.0),
            ],
        )
        .unwrap();
        let (vals, vecs) = hermitian_eigen(&m).unwrap();
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        for (l, v) in vals.iter().zip(&vecs) {
            let r: Vec<Complex64> = m.mul_vec(v).iter().zip(v).map(|(a, b)| a - b * l).collect();
            assert!(norm(&r) < 1e-13);
        }
        let trace: f64 = vals.iter().sum();
        assert!((trace - 2.0).abs() < 1e-13);
    }
}
