//! Dense complex matrix kernels: exponential, principal logarithm,
//! Schur/eigen machinery, Jordan-style splitting for singular generators,
//! polar decomposition of symmetric squeeze matrices, and the 2×2
//! Sylvester-interpolation logarithm.
//!
//! Everything here targets the small matrices this crate works with
//! (2n × 2n for n ≤ 8, plus moderately sized truncated Fock operators);
//! robustness is preferred over asymptotic speed throughout.

mod basic;
mod expm;
mod hermitian;
mod jordan;
mod logm;
mod polar;
mod schur;
mod sylvester;

pub use basic::{
    adjoint, cond_1, identity, inverse, is_finite_mat, max_abs, max_abs_diff, max_abs_vec,
    one_norm, solve, solve_right, solve_vec, transpose,
};
pub use expm::mat_exp;
pub use hermitian::{eigh, funm_hermitian, HermitianEigen};
pub use jordan::{jordan_split, jordan_split_null_count, JordanSplit};
pub use logm::mat_log_principal;
pub use polar::{polar_decompose_squeeze, SqueezePolar};
pub use schur::{eig, schur, Schur};
pub use sylvester::{sylvester_log_2x2, symplectic_log_coeffs_2x2};
