//! Random channels and states for property tests and benchmarks.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::channel::{KrausChannel, QuantumState, STRICT_TOL};
use crate::numerics::{inner, normalized, CVector, ComplexMatrix};

pub fn gaussian_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CVector {
    (0..n)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect()
}

/// Complex Ginibre matrix with standard normal entries.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    let data = gaussian_vector(rows * cols, rng);
    ComplexMatrix::from_vec(rows, cols, data).expect("gaussian entries are finite")
}

/// Haar-like random isometry `C^cols → C^rows` (`rows ≥ cols`), by
/// orthonormalizing Gaussian columns.
pub fn random_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    assert!(rows >= cols, "isometry needs rows >= cols");
    let mut basis: Vec<CVector> = Vec::with_capacity(cols);
    while basis.len() < cols {
        let mut v = gaussian_vector(rows, rng);
        for _ in 0..2 {
            for b in &basis {
                let c = inner(b, &v);
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= c * y;
                }
            }
        }
        if let Some(u) = normalized(&v) {
            basis.push(u);
        }
    }
    ComplexMatrix::from_columns(rows, &basis)
}

pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    random_isometry(d, d, rng)
}

/// Splits a `κd × d` isometry into `κ` stacked `d×d` Kraus operators.
fn split_isometry(v: &ComplexMatrix, kappa: usize, d: usize) -> Vec<ComplexMatrix> {
    (0..kappa)
        .map(|k| {
            let mut a = ComplexMatrix::zeros(d, d);
            for i in 0..d {
                for j in 0..d {
                    a[(i, j)] = v[(k * d + i, j)];
                }
            }
            a
        })
        .collect()
}

/// Generic CPTP channel from a random isometry, already strictly validated.
pub fn random_channel<R: Rng + ?Sized>(d: usize, kappa: usize, rng: &mut R) -> KrausChannel {
    let v = random_isometry(kappa * d, d, rng);
    KrausChannel::new("random", split_isometry(&v, kappa, d))
        .and_then(|c| c.validated(STRICT_TOL))
        .expect("random isometry channels are CPTP")
}

/// CPTP channel with `planted` common eigenvectors: `A_i = U (D_i ⊕ B_i) U†`
/// where the `D_i` are diagonal with `Σ_i |D_i|² = I` and the `B_i` come from a
/// random isometry. Returns the channel and the planted vectors `U e_j`.
pub fn planted_channel<R: Rng + ?Sized>(d: usize, kappa: usize, planted: usize, rng: &mut R) -> (KrausChannel, Vec<CVector>) {
    assert!(planted <= d, "cannot plant more than d eigenvectors");
    let u = random_unitary(d, rng);
    let rest = d - planted;
    let blocks = if rest > 0 {
        split_isometry(&random_isometry(kappa * rest, rest, rng), kappa, rest)
    } else {
        vec![ComplexMatrix::zeros(0, 0); kappa]
    };
    let tuples: Vec<CVector> = (0..planted)
        .map(|_| normalized(&gaussian_vector(kappa, rng)).expect("nonzero gaussian"))
        .collect();

    let ops = (0..kappa)
        .map(|i| {
            let mut core = ComplexMatrix::zeros(d, d);
            for (j, t) in tuples.iter().enumerate() {
                core[(j, j)] = t[i];
            }
            for r in 0..rest {
                for c in 0..rest {
                    core[(planted + r, planted + c)] = blocks[i][(r, c)];
                }
            }
            &(&u * &core) * &u.adjoint()
        })
        .collect();
    let channel = KrausChannel::new("planted", ops)
        .and_then(|c| c.validated(STRICT_TOL))
        .expect("planted channels are CPTP");
    let vectors = (0..planted).map(|j| u.column(j)).collect();
    (channel, vectors)
}

pub fn random_pure_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> QuantumState {
    QuantumState::pure_normalized(&gaussian_vector(d, rng)).expect("nonzero gaussian")
}

/// Random full-rank density matrix `G G† / tr(G G†)`.
pub fn random_density_matrix<R: Rng + ?Sized>(d: usize, rng: &mut R) -> QuantumState {
    let g = ginibre(d, d, rng);
    let p = &g * &g.adjoint();
    let rho = p.scale_real(1.0 / p.trace().re).hermitian_part();
    QuantumState::mixed(rho).expect("G G† is a valid state after normalization")
}
