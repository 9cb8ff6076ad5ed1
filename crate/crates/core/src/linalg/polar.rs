//! Polar form `z = r e^{iθ}` of a complex symmetric squeeze matrix, with
//! `r` positive semidefinite and `θ` Hermitian.
//!
//! The factorization goes through the Autonne–Takagi decomposition
//! `z = V Σ Vᵀ`: then `r = V Σ V†` and `e^{iθ} = V Vᵀ`. The Takagi basis
//! is recovered from the Hermitian eigendecomposition of `z z†` with a
//! per-block symmetric-unitary square root correction.

use ndarray::Array2;

use super::basic::{adjoint, identity, max_abs, max_abs_diff, transpose};
use super::hermitian::{eigh, funm_hermitian};
use super::schur::schur;
use crate::tol::Tolerances;
use crate::{im, re, CMat, Cx, Error, RealScalar, Result};

/// Polar factors of a symmetric squeeze matrix.
#[derive(Debug, Clone)]
pub struct SqueezePolar<T> {
    /// `r`: Hermitian positive semidefinite modulus.
    pub modulus: CMat<T>,
    /// `θ`: Hermitian phase with eigenvalues in `(-π, π]`.
    pub phase: CMat<T>,
    /// Set when `z` has a numerically zero singular value; the phase on
    /// that null space is fixed by convention, not by the data.
    pub degenerate: bool,
}

/// Hermitian `θ` with `e^{iθ} = U` for (numerically) unitary `U`.
fn log_unitary<T: RealScalar>(u: &CMat<T>) -> Result<CMat<T>> {
    let dec = schur(u)?;
    let p = u.nrows();
    let mut theta: CMat<T> = Array2::zeros((p, p));
    for i in 0..p {
        theta[[i, i]] = re(dec.t[[i, i]].arg());
    }
    let theta = dec.q.dot(&theta).dot(&adjoint(&dec.q));
    // Hermitize away the rounding (and any tiny Schur off-diagonals).
    Ok((&theta + &adjoint(&theta)).mapv(|z| z * re(crate::conv::<T>(0.5))))
}

/// Decompose a symmetric matrix as `z = r e^{iθ}`.
///
/// Zero singular values are completed by convention: the phase acts as the
/// identity on the null space whenever that completion stays unitary, and
/// by the Takagi factor otherwise. Degeneracy is reported through the
/// `degenerate` flag rather than as an error.
pub fn polar_decompose_squeeze<T: RealScalar>(
    z: &CMat<T>,
    tol: &Tolerances<T>,
) -> Result<SqueezePolar<T>> {
    let n = z.nrows();
    assert_eq!(n, z.ncols(), "squeeze matrix must be square");
    let scale = max_abs(z).max(T::one());
    if max_abs_diff(z, &transpose(z)) > tol.structure * scale {
        return Err(Error::StructureViolation(
            "squeeze matrix is not symmetric".into(),
        ));
    }
    if n == 0 {
        return Ok(SqueezePolar {
            modulus: Array2::zeros((0, 0)),
            phase: Array2::zeros((0, 0)),
            degenerate: false,
        });
    }

    let zzh = z.dot(&adjoint(z));
    let eigen = eigh(&zzh)?;
    // Descending singular values.
    let order: Vec<usize> = (0..n).rev().collect();
    let sigmas: Vec<T> = order
        .iter()
        .map(|&i| eigen.values[i].max(T::zero()).sqrt())
        .collect();
    let mut w: CMat<T> = Array2::zeros((n, n));
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..n {
            w[[row, new_col]] = eigen.vectors[[row, old_col]];
        }
    }

    let sigma_max = sigmas[0];
    if sigma_max == T::zero() {
        return Ok(SqueezePolar {
            modulus: Array2::zeros((n, n)),
            phase: Array2::zeros((n, n)),
            degenerate: true,
        });
    }
    let zero_thr = tol.rank_rel * sigma_max;
    let group_thr = (tol.eig_rel * sigma_max).max(sigma_max * T::epsilon() * crate::conv(1e3));
    let rank = sigmas.iter().filter(|&&s| s > zero_thr).count();
    let degenerate = rank < n;

    // r = W Σ W†.
    let mut r_scaled = w.clone();
    for (j, s) in sigmas.iter().enumerate() {
        for i in 0..n {
            r_scaled[[i, j]] = r_scaled[[i, j]] * re(*s);
        }
    }
    let modulus = r_scaled.dot(&adjoint(&w));
    let modulus = (&modulus + &adjoint(&modulus)).mapv(|x| x * re(crate::conv::<T>(0.5)));

    // Takagi correction per block of equal singular values.
    let mut takagi = w.clone();
    let mut start = 0;
    while start < rank {
        let mut end = start + 1;
        while end < rank && (sigmas[start] - sigmas[end]).abs() <= group_thr {
            end += 1;
        }
        let k = end - start;
        let wb = w.slice(ndarray::s![.., start..end]).to_owned();
        let g = adjoint(&wb)
            .dot(z)
            .dot(&wb.mapv(|q| q.conj()))
            .mapv(|q| q / re(sigmas[start]));
        // G is symmetric unitary: G = e^{iA} with A real symmetric, and the
        // block correction is B = e^{iA/2}.
        let a = log_unitary(&g)?;
        let mut a_real: CMat<T> = Array2::zeros((k, k));
        for i in 0..k {
            for j in 0..k {
                let v = (a[[i, j]].re + a[[j, i]].re) * crate::conv::<T>(0.5);
                a_real[[i, j]] = re(v);
            }
        }
        let b = funm_hermitian(&a_real, |x| (im(x) * re(crate::conv::<T>(0.5))).exp())?;
        let vb = wb.dot(&b);
        for j in 0..k {
            for i in 0..n {
                takagi[[i, start + j]] = vb[[i, j]];
            }
        }
        start = end;
    }

    let v_plus = takagi.slice(ndarray::s![.., ..rank]).to_owned();
    let w_null = w.slice(ndarray::s![.., rank..]).to_owned();

    // Preferred completion: identity on the null space.
    let mut u = v_plus.dot(&transpose(&v_plus));
    if rank < n {
        u = u + w_null.dot(&adjoint(&w_null));
        let residual = max_abs_diff(&adjoint(&u).dot(&u), &identity(n));
        if residual > tol.recon {
            // Fall back to the Takagi completion, which is always unitary.
            u = v_plus.dot(&transpose(&v_plus)) + w_null.dot(&transpose(&w_null));
        }
    }

    let phase = log_unitary(&u)?;

    // Authoritative guard: the factors must reassemble the input.
    let expiphase = funm_hermitian(&phase, |x| im(x).exp())?;
    let reassembled = modulus.dot(&expiphase);
    let err = max_abs_diff(&reassembled, z);
    if err > tol.recon * scale.max(sigma_max) {
        return Err(Error::StructureViolation(format!(
            "polar reassembly residual {:e} exceeds tolerance",
            err.to_f64().unwrap_or(f64::NAN)
        )));
    }

    Ok(SqueezePolar {
        modulus,
        phase,
        degenerate,
    })
}

#[allow(dead_code)]
fn cx_type_anchor<T: RealScalar>(_: Cx<T>) {}
