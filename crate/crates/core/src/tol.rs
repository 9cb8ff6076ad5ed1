//! Numerical tolerances used throughout the crate.
//!
//! The defaults are calibrated for `f64` on systems up to n = 8 modes:
//! double precision leaves roughly five orders of magnitude of headroom
//! between accumulated rounding and the loosest structural threshold.

use crate::{conv, RealScalar};

/// Tolerance bundle threaded through validation and the matrix kernels.
///
/// Relative thresholds (`structure`, `eig_rel`, `rank_rel`) are scaled by
/// the magnitude of the matrix they are applied to; the rest are absolute.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances<T> {
    /// Block/Hermitian/symmetric structure checks, relative to the largest
    /// entry.
    pub structure: T,
    /// Symplectic-condition residual `‖SΩS† − Ω‖_max`.
    pub symplectic: T,
    /// Reassembly checks such as `r e^{iθ} = z`.
    pub recon: T,
    /// Generic agreement of two numerically equivalent routes.
    pub num: T,
    /// Eigenvalue-degeneracy detection, relative to the largest eigenvalue.
    pub eig_rel: T,
    /// Numerical-rank threshold, relative to the largest singular value.
    pub rank_rel: T,
    /// Divergence guard on closed-form denominators.
    pub den: T,
    /// Maximum acceptable eigenvector-basis condition number.
    pub cond_max: T,
}

impl<T: RealScalar> Default for Tolerances<T> {
    fn default() -> Self {
        Self {
            structure: conv(1e-10),
            symplectic: conv(1e-9),
            recon: conv(1e-9),
            num: conv(1e-9),
            eig_rel: conv(1e-8),
            rank_rel: conv(1e-10),
            den: conv(1e-8),
            cond_max: conv(1e10),
        }
    }
}

impl<T: RealScalar> Tolerances<T> {
    /// Defaults, spelled out for call sites that want to be explicit.
    pub fn standard() -> Self {
        Self::default()
    }
}
