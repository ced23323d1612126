//! Zero-error block codes over a set of non-adjacent input states.
//!
//! Each message `i` is encoded as `ρ_i^{⊗n}` (repetition), measured letter by
//! letter with the POVM `{Π_1, …, Π_m, I − ΣΠ_i}` where `Π_i` projects onto the
//! support of `ℰ(ρ_i)`, and decoded from the first letter whose outcome names a
//! message.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::{apply, ChannelError, KrausChannel, QuantumState};
use crate::distinguishability::{adjacency_test, GraphError, ADJACENCY_TOL, SUPPORT_TOL};
use crate::numerics::{hermitian_eigen, support_projector, ComplexMatrix, NumericsError};

/// Allowed decoding error per message.
pub const ZERO_ERROR_TOL: f64 = 1e-9;
/// Largest number of block outcomes `(m+1)^n`.
pub const MAX_OUTCOMES: usize = 4096;
/// Probabilities this far outside `[0, 1]` are clamped and noted.
pub const CLAMP_TOL: f64 = 1e-12;

const SUPPORT_OVERLAP_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CodeError {
    #[error("a code needs at least one codeword")]
    Empty,
    #[error("block length must be at least 1")]
    BlockLength,
    #[error("need at least 2 non-adjacent witness states, found {available}")]
    NoWitness { available: usize },
    #[error("codewords {i} and {j} are adjacent (output overlap {overlap:.3e})")]
    AdjacentCodewords { i: usize, j: usize, overlap: f64 },
    #[error("output supports of codewords {i} and {j} overlap ({overlap:.3e})")]
    OverlappingSupports { i: usize, j: usize, overlap: f64 },
    #[error("{outcomes} block outcomes exceed the budget of {limit}")]
    BudgetExceeded { outcomes: usize, limit: usize },
    #[error("p({j}|{i}) = {value:.3e} is not a probability")]
    InvalidProbability { i: usize, j: usize, value: f64 },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Outcome-to-message map for block outcomes written in base `k = m + 1`,
/// first letter most significant. Letter outcome `m` is the dead letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decoder {
    pub messages: usize,
    pub block_length: usize,
}

/// A decoded outcome; `dead_letter` marks outcomes where no letter named a message.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decoded {
    pub message: usize,
    pub dead_letter: bool,
}

impl Decoder {
    pub fn outcomes_per_letter(&self) -> usize {
        self.messages + 1
    }

    pub fn outcome_count(&self) -> usize {
        self.outcomes_per_letter().pow(self.block_length as u32)
    }

    /// Letter outcomes of a block outcome, first letter first.
    pub fn letters(&self, mut outcome: usize) -> Vec<usize> {
        let k = self.outcomes_per_letter();
        let mut out = vec![0; self.block_length];
        for slot in out.iter_mut().rev() {
            *slot = outcome % k;
            outcome /= k;
        }
        out
    }

    /// `g(j)`: the first informative letter, or message 0 flagged as dead letter.
    pub fn decode(&self, outcome: usize) -> Decoded {
        match self.letters(outcome).into_iter().find(|&j| j < self.messages) {
            Some(message) => Decoded {
                message,
                dead_letter: false,
            },
            None => Decoded {
                message: 0,
                dead_letter: true,
            },
        }
    }
}

/// An `(m, n)` repetition code with a per-letter POVM.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroErrorCode {
    pub m: usize,
    pub n: usize,
    pub alphabet: Vec<QuantumState>,
    /// Codeword of message `i` as alphabet indices, one per letter.
    pub encoder: Vec<Vec<usize>>,
    /// Per-letter POVM: `m` support projectors, then the completion.
    pub povm: Vec<ComplexMatrix>,
    pub decoder: Decoder,
}

impl ZeroErrorCode {
    /// `‖Σ_j M_j − I‖_max`
    pub fn povm_completeness_defect(&self) -> f64 {
        let d = self.povm[0].rows();
        let sum = self.povm.iter().fold(ComplexMatrix::zeros(d, d), |acc, m| &acc + m);
        (&sum - &ComplexMatrix::identity(d)).norm_max()
    }

    /// Smallest eigenvalue over all POVM elements.
    pub fn min_povm_eigenvalue(&self) -> Result<f64, NumericsError> {
        let mut low = f64::INFINITY;
        for m in &self.povm {
            let (values, _) = hermitian_eigen(m)?;
            low = low.min(values[0]);
        }
        Ok(low)
    }

    pub fn rate(&self) -> f64 {
        code_rate(self.m, self.n)
    }
}

/// Builds the repetition code of length `n` over pairwise non-adjacent states.
pub fn build_code(ch: &KrausChannel, codewords: &[QuantumState], n: usize) -> Result<ZeroErrorCode, CodeError> {
    let m = codewords.len();
    if m == 0 {
        return Err(CodeError::Empty);
    }
    if n == 0 {
        return Err(CodeError::BlockLength);
    }
    let outcomes = (m + 1)
        .checked_pow(n as u32)
        .filter(|k| *k <= MAX_OUTCOMES)
        .ok_or(CodeError::BudgetExceeded {
            outcomes: (m + 1).saturating_pow(n as u32),
            limit: MAX_OUTCOMES,
        })?;
    debug_assert!(outcomes >= 2);
    for i in 0..m {
        for j in i + 1..m {
            let r = adjacency_test(ch, &codewords[i], &codewords[j], ADJACENCY_TOL)?;
            if r.verdict.is_adjacent() {
                return Err(CodeError::AdjacentCodewords {
                    i,
                    j,
                    overlap: r.trace_overlap,
                });
            }
        }
    }
    Ok(ZeroErrorCode {
        m,
        n,
        alphabet: codewords.to_vec(),
        encoder: (0..m).map(|i| vec![i; n]).collect(),
        povm: build_povm(ch, codewords)?,
        decoder: Decoder {
            messages: m,
            block_length: n,
        },
    })
}

/// `M_i = Π_supp ℰ(ρ_i)` for each codeword, then `M_m = I − Σ M_i`.
pub fn build_povm(ch: &KrausChannel, codewords: &[QuantumState]) -> Result<Vec<ComplexMatrix>, CodeError> {
    let d = ch.dim();
    let mut povm = Vec::with_capacity(codewords.len() + 1);
    for rho in codewords {
        povm.push(support_projector(&apply(ch, rho)?, SUPPORT_TOL)?);
    }
    for i in 0..povm.len() {
        for j in i + 1..povm.len() {
            let overlap = (&povm[i] * &povm[j]).norm_fro();
            if overlap > SUPPORT_OVERLAP_TOL {
                return Err(CodeError::OverlappingSupports { i, j, overlap });
            }
        }
    }
    let used = povm.iter().fold(ComplexMatrix::zeros(d, d), |acc, p| &acc + p);
    povm.push((&ComplexMatrix::identity(d) - &used).hermitian_part());
    Ok(povm)
}

/// A probability that left `[0, 1]` by rounding and was clamped back.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClampNote {
    pub message: usize,
    pub outcome: usize,
    pub raw: f64,
}

/// `p(j|i)` with messages as rows and block outcomes as columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionMatrix {
    pub p: Vec<Vec<f64>>,
    pub clamped: Vec<ClampNote>,
}

impl TransitionMatrix {
    /// Largest `|Σ_j p(j|i) − 1|`.
    pub fn max_row_defect(&self) -> f64 {
        self.p.iter().map(|row| (row.iter().sum::<f64>() - 1.0).abs()).fold(0.0, f64::max)
    }
}

/// `p(j|i) = tr[ℰ(ρ_i) M_j]` per letter; block outcomes multiply across letters.
pub fn transition_probabilities(ch: &KrausChannel, code: &ZeroErrorCode) -> Result<TransitionMatrix, CodeError> {
    let k = code.povm.len();
    let mut clamped = Vec::new();
    let mut letter = vec![vec![0.0; k]; code.alphabet.len()];
    for (a, rho) in code.alphabet.iter().enumerate() {
        let out = apply(ch, rho)?;
        for (j, m) in code.povm.iter().enumerate() {
            let raw = out.hs_inner(m).re;
            letter[a][j] = if (0.0..=1.0).contains(&raw) {
                raw
            } else if (-CLAMP_TOL..=1.0 + CLAMP_TOL).contains(&raw) {
                clamped.push(ClampNote {
                    message: a,
                    outcome: j,
                    raw,
                });
                raw.clamp(0.0, 1.0)
            } else {
                return Err(CodeError::InvalidProbability { i: a, j, value: raw });
            };
        }
    }

    let outcomes = code.decoder.outcome_count();
    let p = code
        .encoder
        .iter()
        .map(|word| {
            (0..outcomes)
                .map(|y| code.decoder.letters(y).iter().zip(word).map(|(&j, &a)| letter[a][j]).product())
                .collect()
        })
        .collect();
    Ok(TransitionMatrix { p, clamped })
}

/// `max_i Σ_{j : g(j) ≠ i} p(j|i)`
pub fn max_error_probability(tm: &TransitionMatrix, decoder: &Decoder) -> f64 {
    let table: Vec<usize> = (0..decoder.outcome_count()).map(|y| decoder.decode(y).message).collect();
    tm.p.iter()
        .enumerate()
        .map(|(i, row)| row.iter().zip(&table).filter(|(_, &g)| g != i).map(|(p, _)| p).sum::<f64>())
        .fold(0.0, f64::max)
}

/// True iff every message decodes wrongly with probability at most [`ZERO_ERROR_TOL`].
pub fn verify_zero_error(tm: &TransitionMatrix, decoder: &Decoder) -> bool {
    max_error_probability(tm, decoder) <= ZERO_ERROR_TOL
}

/// `(1/n) log₂ m` bits per channel use.
pub fn code_rate(m: usize, n: usize) -> f64 {
    assert!(m >= 1 && n >= 1, "code_rate needs m, n >= 1");
    (m as f64).log2() / n as f64
}
