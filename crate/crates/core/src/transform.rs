//! The Hamiltonian ↔ symplectic conversion engine.
//!
//! Forward: `S = e^{-iΩH}`, `s = Ψh` with `Ψ = (S − I)H⁻¹` when `H` is
//! invertible and the Jordan-split summation of the series otherwise.
//! Inverse: `H = iΩ·log S` through the principal matrix logarithm.

use ndarray::Array2;

use crate::linalg::{
    eigh, identity, jordan_split_null_count, mat_exp, mat_log_principal, max_abs, solve,
    solve_vec,
};
use crate::model::{omega, Hamiltonian, PsiMatrix, SymplecticPair};
use crate::tol::Tolerances;
use crate::{re, CMat, CVec, Cx, Error, RealScalar, Result};

/// Which route produced the Ψ matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsiPath {
    /// `Ψ = (S − I)H⁻¹` (H invertible at the rank threshold).
    ClosedForm,
    /// Jordan-split finite summation (H singular).
    JordanSeries,
    /// Truncated series fallback after an ill-conditioned split.
    SeriesFallback,
}

/// Result of the forward map: the symplectic pair, the displacement matrix,
/// and the route that computed it.
#[derive(Debug, Clone)]
pub struct TransformOutput<T> {
    pub pair: SymplecticPair<T>,
    pub psi: PsiMatrix<T>,
    pub path: PsiPath,
}

/// Displacement-cascade convention for [`decompose_affine`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AffineMode {
    /// Displace by `Y = S⁻¹s` first, then apply the linear map.
    PreDisplacement,
    /// Apply the linear map first, then displace by `s`.
    PostDisplacement,
}

/// A symplectic pair split into its linear part and a displacement.
#[derive(Debug, Clone)]
pub struct AffineDecomposition<T> {
    pub mode: AffineMode,
    /// The common linear transformation (shift cleared).
    pub linear: SymplecticPair<T>,
    /// Upper half of the conjugate-paired shift vector.
    pub shift: CVec<T>,
}

impl<T: RealScalar> AffineDecomposition<T> {
    /// Recompose into a single affine pair; the result must equal the input
    /// of [`decompose_affine`] in either mode.
    pub fn recompose(&self, tol: &Tolerances<T>) -> Result<SymplecticPair<T>> {
        match self.mode {
            AffineMode::PostDisplacement => self.linear.with_shift(self.shift.clone()),
            AffineMode::PreDisplacement => {
                // S(ξ + Y) = Sξ + SY: shift block is  E y + F ȳ.
                let ybar = self.shift.mapv(|z| z.conj());
                let s = self.linear.e().dot(&self.shift) + self.linear.f().dot(&ybar);
                let _ = tol;
                self.linear.with_shift(s)
            }
        }
    }
}

fn minus_i_omega_h<T: RealScalar>(ham: &Hamiltonian<T>) -> CMat<T> {
    let full = ham.full_matrix();
    let om = omega::<T>(ham.modes());
    om.dot(&full).mapv(|z| z * Cx::new(T::zero(), -T::one()))
}

/// Numerical rank of the Hermitian matrix `H` at `tol.rank_rel·σ_max`,
/// together with `σ_max`.
fn hermitian_rank<T: RealScalar>(full: &CMat<T>, tol: &Tolerances<T>) -> Result<(usize, T)> {
    let eigen = eigh(full)?;
    let sigma_max = eigen
        .values
        .iter()
        .fold(T::zero(), |acc, v| acc.max(v.abs()));
    if sigma_max == T::zero() {
        return Ok((0, T::zero()));
    }
    let thr = tol.rank_rel * sigma_max;
    let rank = eigen.values.iter().filter(|v| v.abs() > thr).count();
    Ok((rank, sigma_max))
}

/// Forward map `(H, h) → (S, s)` with `Ψ` attached.
///
/// `Ψ` is always computed (callers reuse it across linear terms); `s` is
/// assembled at block level as `s = Ph + Qh̄` so the conjugate pairing is
/// exact.
pub fn forward_transform<T: RealScalar>(
    ham: &Hamiltonian<T>,
    tol: &Tolerances<T>,
) -> Result<TransformOutput<T>> {
    let n = ham.modes();
    let c = minus_i_omega_h(ham);
    let s_full = mat_exp(&c)?;
    let pair = SymplecticPair::from_full(&s_full, &CVec::zeros(2 * n), tol)?;

    let full_h = ham.full_matrix();
    let (rank, _sigma_max) = hermitian_rank(&full_h, tol)?;

    let (psi, path) = if rank == 2 * n {
        // Ψ H = S − I  ⇒  H† Ψ† = (S − I)†, and H is Hermitian.
        let rhs = (&s_full - &identity(2 * n)).t().mapv(|z| z.conj());
        let psi_adj = solve(&full_h, &rhs)?;
        let psi_full = psi_adj.t().mapv(|z| z.conj());
        (PsiMatrix::from_full(&psi_full, tol)?, PsiPath::ClosedForm)
    } else {
        match singular_psi(ham, tol) {
            Ok(psi) => (psi, PsiPath::JordanSeries),
            Err(Error::IllConditioned { .. }) => (
                psi_series_oracle(ham, crate::conv(1e-13))?,
                PsiPath::SeriesFallback,
            ),
            Err(other) => return Err(other),
        }
    };

    let shift = psi.displacement(ham.h())?;
    let pair = pair.with_shift(shift)?;
    // Symplectic condition is enforced again on the final pair.
    pair.validate(tol)?;
    Ok(TransformOutput { pair, psi, path })
}

/// Closed-form Ψ for singular `H` via the Jordan split of `-iΩH`:
/// `Ψ = V (W_r ⊕ W_0) V⁻¹ (−iΩ)` with `W_r = (e^{Λ_r} − I)Λ_r⁻¹` and
/// `W_0 = Σ_{m≥1} Λ_0^{m-1}/m!` (a finite sum).
pub fn singular_psi<T: RealScalar>(
    ham: &Hamiltonian<T>,
    tol: &Tolerances<T>,
) -> Result<PsiMatrix<T>> {
    let n = ham.modes();
    let c = minus_i_omega_h(ham);
    // Ω is invertible, so the corank of C = −iΩH equals the corank of the
    // Hermitian H — and the Hermitian eigenvalues are the reliable way to
    // count it (defective zeros of C itself smear by O(√ε) under any
    // backward-stable eigensolver).
    let (rank_h, _) = hermitian_rank(&ham.full_matrix(), tol)?;
    let null_count = 2 * n - rank_h;
    let split = jordan_split_null_count(&c, null_count, tol)?;
    if split.ill_conditioned {
        return Err(Error::IllConditioned {
            cond: split.cond.to_f64().unwrap_or(f64::INFINITY),
        });
    }

    let r = split.rank;
    let p = 2 * n;
    let mut w: CMat<T> = Array2::zeros((p, p));
    if r > 0 {
        let exp_r = mat_exp(&split.lambda_r)?;
        let w_r = solve(&split.lambda_r, &(&exp_r - &identity(r)))?;
        w.slice_mut(ndarray::s![..r, ..r]).assign(&w_r);
    }
    if r < p {
        let m = p - r;
        // Finite nilpotent sum: I/1! + Λ₀/2! + Λ₀²/3! + …
        let mut term: CMat<T> = identity(m);
        let mut w_0: CMat<T> = identity(m);
        let mut factorial = T::one();
        for k in 2..=m {
            term = term.dot(&split.lambda_0);
            factorial = factorial * crate::conv::<T>(k as f64);
            if max_abs(&term) == T::zero() {
                break;
            }
            let inv_fact = re(T::one() / factorial);
            w_0 = w_0 + term.mapv(|z| z * inv_fact);
        }
        w.slice_mut(ndarray::s![r.., r..]).assign(&w_0);
    }

    let minus_i_om = omega::<T>(n).mapv(|z| z * Cx::new(T::zero(), -T::one()));
    let psi_full = split.basis.dot(&w).dot(&split.basis_inv).dot(&minus_i_om);
    PsiMatrix::from_full(&psi_full, tol)
}

/// Ground-truth Ψ by direct partial summation of
/// `Σ_{m≥1} (1/m!)(-iΩH)^{m-1}(-iΩ)`, stopping when the latest term norm
/// falls below `series_tol` times the running sum norm.
pub fn psi_series_oracle<T: RealScalar>(
    ham: &Hamiltonian<T>,
    series_tol: T,
) -> Result<PsiMatrix<T>> {
    let n = ham.modes();
    let c = minus_i_omega_h(ham);
    let minus_i_om = omega::<T>(n).mapv(|z| z * Cx::new(T::zero(), -T::one()));

    let mut term = minus_i_om.clone(); // m = 1 term: (1/1!)·C⁰·(−iΩ)
    let mut sum = term.clone();
    let max_terms = 200usize;
    for m in 2..=max_terms {
        term = c.dot(&term).mapv(|z| z / re(crate::conv::<T>(m as f64)));
        sum = sum + &term;
        let term_norm = max_abs(&term);
        let sum_norm = max_abs(&sum).max(T::epsilon());
        if term_norm < series_tol * sum_norm {
            let tol = Tolerances::default();
            return PsiMatrix::from_full(&sum, &tol);
        }
    }
    Err(Error::NoConvergence { terms: max_terms })
}

/// Inverse map `S → H = iΩ·log S` (principal branch).
///
/// The recovered matrix must pass Hermitian block-structure validation;
/// failure signals an input that is not a structured symplectic matrix.
pub fn inverse_hamiltonian<T: RealScalar>(
    pair: &SymplecticPair<T>,
    tol: &Tolerances<T>,
) -> Result<Hamiltonian<T>> {
    let n = pair.modes();
    let log_s = mat_log_principal(&pair.full_matrix(), tol)?;
    let i_omega = omega::<T>(n).mapv(|z| z * Cx::new(T::zero(), T::one()));
    let h_full = i_omega.dot(&log_s);
    let zero = CVec::zeros(2 * n);
    Hamiltonian::from_full(&h_full, &zero, tol)
}

/// Split an affine pair into its linear part and a displacement, in either
/// cascade order.
pub fn decompose_affine<T: RealScalar>(
    pair: &SymplecticPair<T>,
    mode: AffineMode,
) -> Result<AffineDecomposition<T>> {
    let linear = pair.with_shift(CVec::zeros(pair.modes()))?;
    let shift = match mode {
        AffineMode::PostDisplacement => pair.s().clone(),
        AffineMode::PreDisplacement => {
            // Y = S⁻¹ s (full), then keep the upper half.
            let y_full = solve_vec(&pair.full_matrix(), &pair.full_vector())?;
            y_full.slice(ndarray::s![..pair.modes()]).to_owned()
        }
    };
    Ok(AffineDecomposition {
        mode,
        linear,
        shift,
    })
}
