//! Certified lower bounds on the zero-error capacity of quantum channels.
//!
//! A channel is given by Kraus operators `{A_i}` with `Σ A_i†A_i = I`. Any unit
//! vector that is simultaneously an eigenvector of every `A_i` is a fixed
//! point of the channel, and pairwise orthogonal fixed pure states can be sent
//! without error. Counting an orthonormal family of such common eigenstates,
//! `n_E`, therefore certifies `C⁰ ≥ log₂ n_E`.
//!
//! The crate is organized bottom-up:
//!
//! - [`numerics`]: dense complex linear algebra (eigenspaces, kernels,
//!   principal-angle intersections, support projectors).
//! - [`channel`]: Kraus channels, their file format, completeness validation,
//!   channel application and the superoperator matrix.
//! - [`spectral`]: common eigenstates of the Kraus set and the resulting bound.
//! - [`fixed_points`]: the fixed-operator space and orthogonal pure fixed states.
//! - [`distinguishability`]: adjacency tests, confusability graphs, exact
//!   independence numbers and strong products.
//! - [`codec`]: zero-error block codes, decoding POVMs and transition matrices.
//! - [`report`]: the analysis pipeline and its JSON report.
//!
//! ```
//! use zec_core::channel::{parse_channel, Params};
//! use zec_core::spectral::find_common_eigenstates;
//!
//! let text = r#"{"name": "flip", "dim": 2, "kraus": [
//!     [[[1,0],[0,0]],[[0,0],[-1,0]]]
//! ]}"#;
//! let ch = parse_channel(text, &Params::new()).unwrap();
//! let cells = find_common_eigenstates(&ch, 1e-7).unwrap();
//! assert_eq!(cells.iter().map(|c| c.dim()).sum::<usize>(), 2);
//! ```

pub mod channel;
pub mod codec;
pub mod distinguishability;
pub mod fixed_points;
pub mod numerics;
pub mod random;
pub mod report;
pub mod spectral;

pub use channel::{KrausChannel, QuantumState};
pub use num_complex::Complex64;
pub use numerics::{CVector, ComplexMatrix, Subspace};

use thiserror::Error;

/// Umbrella error for the analysis pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Numerics(#[from] numerics::NumericsError),
    #[error(transparent)]
    Channel(#[from] channel::ChannelError),
    #[error(transparent)]
    Parse(#[from] channel::ParseError),
    #[error(transparent)]
    Graph(#[from] distinguishability::GraphError),
    #[error(transparent)]
    Code(#[from] codec::CodeError),
}
