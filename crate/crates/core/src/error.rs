//! Error classes shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes of the numerical kernels and representation builders.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A matrix or vector violates the required block/Hermitian/symplectic
    /// structure beyond tolerance.
    #[error("structure violation: {0}")]
    StructureViolation(String),

    /// NaN or infinity encountered in an input.
    #[error("non-finite entry in input")]
    NonFinite,

    /// Matrix is numerically singular where an inverse is required.
    #[error("singular matrix: {0}")]
    Singular(String),

    /// An eigenvalue sits on (or too close to) the closed negative real
    /// axis, where the principal logarithm is not defined.
    #[error("eigenvalue {re:e}{im:+e}i within {dist:e} of the negative real axis")]
    BranchCut { re: f64, im: f64, dist: f64 },

    /// An eigenvector basis is too ill-conditioned to trust.
    #[error("ill-conditioned eigenvector basis (cond ≈ {cond:e})")]
    IllConditioned { cond: f64 },

    /// Two eigenvalues coincide where distinctness is required.
    #[error("degenerate eigenvalues: {0}")]
    DegenerateEigenvalues(String),

    /// A rotation eigenvalue lies outside the validity window `[-π, π)` of
    /// the aperiodic closed form.
    #[error("rotation eigenvalue {value} outside the validity window [-π, π)")]
    OutOfPeriod { value: f64 },

    /// Operands have incompatible mode counts or shapes.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// An iterative computation did not converge.
    #[error("no convergence after {terms} terms/iterations")]
    NoConvergence { terms: usize },

    /// Requested Fock-space dimension exceeds the configured cap.
    #[error("Fock dimension {dim} exceeds cap {cap}")]
    DimensionOverflow { dim: usize, cap: usize },

    /// A closed-form denominator is too close to a divergence point.
    #[error("near divergence: |denominator| = {denom:e} below guard {guard:e}")]
    NearDivergence { denom: f64, guard: f64 },

    /// The Heisenberg-check residual exceeds tolerance but shrinks when the
    /// truncation dimension grows, i.e. the failure is truncation, not logic.
    #[error("truncation dominates: residual {residual:e} at d, {refined:e} at d+10")]
    TruncationDominates { residual: f64, refined: f64 },
}
