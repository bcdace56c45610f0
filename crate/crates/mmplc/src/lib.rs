//! Simulator and analysis library for massive-MIMO physical-layer
//! cryptosystems over real Gaussian wiretap channels.
//!
//! The library models the three-party wiretap setup (sender A, legitimate
//! receiver B over channel `H`, eavesdropper E over channel `G`), SVD and
//! inverse precoding, and the decoders each party can run: divide-and-round
//! for B, zero-forcing, successive interference cancellation, and a
//! brute-force ML oracle for E. On top of that sit the decoding-advantage
//! ratios with their closed-form asymptotes, the random-matrix laws that
//! drive them (edge limits, least-singular-value law, quotient-matrix and
//! QR-diagonal distributions), and a seeded Monte Carlo harness that checks
//! every law at desk scale.

pub mod advantage;
pub mod analysis;
pub mod decoders;
pub mod harness;
pub mod matcore;
pub mod rmtlaws;
pub mod wiretap;

pub use matcore::Seed;
// callers build the matrices they pass in, so ship the matrix crate
pub use nalgebra;

/// Library-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("singular matrix: {0}")]
    SingularMatrix(String),
    #[error("decomposition failed to converge")]
    DecompositionFailed,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("guard exceeded: {0}")]
    GuardExceeded(String),
}

pub type Result<T> = std::result::Result<T, Error>;
