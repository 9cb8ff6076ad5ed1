//! Splitting a matrix into its regular and nilpotent spectral parts.
//!
//! `jordan_split` produces `C = V (Λ_r ⊕ Λ_0) V⁻¹` where `Λ_r` collects the
//! eigenvalues above the rank threshold (diagonalized when the eigenvector
//! basis is trustworthy, upper triangular otherwise) and `Λ_0` is exactly
//! nilpotent. This is what the closed-form summation of the displacement
//! series needs when the Hamiltonian is singular.

use ndarray::{s, Array2};

use super::basic::{adjoint, cond_1, identity, inverse, one_norm, solve};
use super::schur::{schur, Schur};
use crate::tol::Tolerances;
use crate::{re, CMat, Cx, Error, RealScalar, Result};

/// Spectral split `C = V (Λ_r ⊕ Λ_0) V⁻¹`.
#[derive(Debug, Clone)]
pub struct JordanSplit<T> {
    /// Change of basis.
    pub basis: CMat<T>,
    /// Cached inverse of `basis`.
    pub basis_inv: CMat<T>,
    /// Block for the eigenvalues above the rank threshold (`rank × rank`);
    /// diagonal when the input restricted to that subspace is
    /// diagonalizable with a well-conditioned eigenbasis.
    pub lambda_r: CMat<T>,
    /// Strictly upper triangular (hence nilpotent) block for the
    /// eigenvalues at numerical zero.
    pub lambda_0: CMat<T>,
    /// Number of eigenvalues above the rank threshold.
    pub rank: usize,
    /// Set when the accumulated basis condition number exceeds the
    /// configured maximum; the split is still returned.
    pub ill_conditioned: bool,
    /// 1-norm condition estimate of `basis`.
    pub cond: T,
}

impl<T: RealScalar> JordanSplit<T> {
    /// Reassemble `V (Λ_r ⊕ Λ_0) V⁻¹`.
    pub fn reconstruct(&self) -> CMat<T> {
        let p = self.basis.nrows();
        let r = self.rank;
        let mut block: CMat<T> = Array2::zeros((p, p));
        block.slice_mut(s![..r, ..r]).assign(&self.lambda_r);
        block.slice_mut(s![r.., r..]).assign(&self.lambda_0);
        self.basis.dot(&block).dot(&self.basis_inv)
    }
}

/// Swap the adjacent diagonal entries `t[k,k]` and `t[k+1,k+1]` of an upper
/// triangular matrix by a unitary similarity, updating `q` alongside.
fn swap_adjacent<T: RealScalar>(dec: &mut Schur<T>, k: usize) {
    let t11 = dec.t[[k, k]];
    let t12 = dec.t[[k, k + 1]];
    let t22 = dec.t[[k + 1, k + 1]];
    // Eigenvector of the 2×2 block for t22 is [t12, t22 − t11]; rotate it
    // onto e₁.
    let x = t12;
    let y = t22 - t11;
    let xn = x.norm();
    let yn = y.norm();
    if yn == T::zero() {
        return; // equal eigenvalues; nothing to move
    }
    let r = xn.hypot(yn);
    let (c, sgn) = if xn == T::zero() {
        (T::zero(), Cx::new(T::one(), T::zero()))
    } else {
        (xn / r, y * x.conj() / re(xn * r))
    };
    let p = dec.t.nrows();
    // Rows k, k+1 of T: G† from the left.
    for col in 0..p {
        let a = dec.t[[k, col]];
        let b = dec.t[[k + 1, col]];
        dec.t[[k, col]] = a * re(c) + b * sgn.conj();
        dec.t[[k + 1, col]] = b * re(c) - a * sgn;
    }
    // Columns k, k+1 of T and Q: G from the right.
    for row in 0..p {
        let a = dec.t[[row, k]];
        let b = dec.t[[row, k + 1]];
        dec.t[[row, k]] = a * re(c) + b * sgn;
        dec.t[[row, k + 1]] = b * re(c) - a * sgn.conj();
        let qa = dec.q[[row, k]];
        let qb = dec.q[[row, k + 1]];
        dec.q[[row, k]] = qa * re(c) + qb * sgn;
        dec.q[[row, k + 1]] = qb * re(c) - qa * sgn.conj();
    }
    dec.t[[k + 1, k]] = Cx::new(T::zero(), T::zero());
    dec.t[[k, k]] = t22;
    dec.t[[k + 1, k + 1]] = t11;
}

/// Solve the triangular Sylvester equation `T₁₁ X − X T₀₀ = −T₁₂` column by
/// column (both coefficient blocks upper triangular).
fn decouple<T: RealScalar>(
    t11: &CMat<T>,
    t00: &CMat<T>,
    t12: &CMat<T>,
) -> Result<CMat<T>> {
    let r = t11.nrows();
    let m = t00.nrows();
    let mut x: CMat<T> = Array2::zeros((r, m));
    for j in 0..m {
        // (T₁₁ − t₀₀[j,j] I) x_j = −T₁₂[:,j] + Σ_{k<j} x_k T₀₀[k,j]
        let mut rhs: Vec<Cx<T>> = (0..r).map(|i| -t12[[i, j]]).collect();
        for k in 0..j {
            let w = t00[[k, j]];
            if w.norm() == T::zero() {
                continue;
            }
            for (i, item) in rhs.iter_mut().enumerate() {
                *item = *item + x[[i, k]] * w;
            }
        }
        let shift = t00[[j, j]];
        for i in (0..r).rev() {
            let mut acc = rhs[i];
            for k in i + 1..r {
                acc = acc - t11[[i, k]] * x[[k, j]];
            }
            let den = t11[[i, i]] - shift;
            if den.norm() == T::zero() {
                return Err(Error::Singular(
                    "coincident eigenvalues across the rank split".into(),
                ));
            }
            x[[i, j]] = acc / den;
        }
    }
    Ok(x)
}

/// Split `C` into regular and nilpotent spectral blocks.
///
/// Eigenvalues with magnitude at most `rank_tol` (an absolute threshold;
/// callers typically pass `tol.rank_rel` times a scale) are routed to the
/// nilpotent block. When the eigenvector basis of the regular block has
/// condition number above `tol.cond_max`, the block stays upper triangular
/// and the split is flagged `ill_conditioned` — callers may fall back to
/// series summation.
pub fn jordan_split<T: RealScalar>(
    c: &CMat<T>,
    rank_tol: T,
    tol: &Tolerances<T>,
) -> Result<JordanSplit<T>> {
    split_impl(c, Selector::Threshold(rank_tol), tol)
}

/// Like [`jordan_split`], but route exactly the `null_count` smallest
/// eigenvalues (by magnitude) to the nilpotent block.
///
/// Defective zero eigenvalues are computed with an O(√ε) perturbation by
/// any backward-stable eigensolver, which a pure magnitude threshold can
/// misclassify; callers that know the true deficiency (for `-iΩH` it is
/// the corank of the Hermitian `H`) should use this entry point.
pub fn jordan_split_null_count<T: RealScalar>(
    c: &CMat<T>,
    null_count: usize,
    tol: &Tolerances<T>,
) -> Result<JordanSplit<T>> {
    split_impl(c, Selector::NullCount(null_count), tol)
}

enum Selector<T> {
    Threshold(T),
    NullCount(usize),
}

fn split_impl<T: RealScalar>(
    c: &CMat<T>,
    selector: Selector<T>,
    tol: &Tolerances<T>,
) -> Result<JordanSplit<T>> {
    let p = c.nrows();
    assert_eq!(p, c.ncols(), "jordan_split requires a square matrix");

    let mut dec = schur(c)?;

    // Effective magnitude threshold separating "zero" from "live".
    let rank_tol = match selector {
        Selector::Threshold(t) => t,
        Selector::NullCount(count) => {
            let count = count.min(p);
            if count == 0 {
                T::zero() - T::one() // below every magnitude
            } else {
                let mut mags: Vec<T> = (0..p).map(|i| dec.t[[i, i]].norm()).collect();
                mags.sort_by(|a, b| a.partial_cmp(b).unwrap());
                mags[count - 1]
            }
        }
    };

    // Bubble every above-threshold eigenvalue ahead of the zeros.
    loop {
        let mut swapped = false;
        for k in 0..p.saturating_sub(1) {
            let top_zero = dec.t[[k, k]].norm() <= rank_tol;
            let bottom_live = dec.t[[k + 1, k + 1]].norm() > rank_tol;
            if top_zero && bottom_live {
                swap_adjacent(&mut dec, k);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }

    let rank = (0..p).filter(|&i| dec.t[[i, i]].norm() > rank_tol).count();

    let t11 = dec.t.slice(s![..rank, ..rank]).to_owned();
    let t12 = dec.t.slice(s![..rank, rank..]).to_owned();
    let t00 = dec.t.slice(s![rank.., rank..]).to_owned();

    // Decouple the off-diagonal block: V = Q·[[I, X],[0, I]].
    let x = if rank == 0 || rank == p {
        Array2::zeros((rank, p - rank))
    } else {
        decouple(&t11, &t00, &t12)?
    };

    let mut coupler = identity(p);
    coupler.slice_mut(s![..rank, rank..]).assign(&x);
    let mut coupler_inv = identity(p);
    coupler_inv
        .slice_mut(s![..rank, rank..])
        .assign(&x.mapv(|z| -z));

    let mut basis = dec.q.dot(&coupler);
    let mut basis_inv = coupler_inv.dot(&adjoint(&dec.q));
    let mut lambda_r = t11;

    // Try to diagonalize the regular block through its own eigenvectors.
    if rank > 1 {
        if let Some((diag, y, y_inv)) = try_diagonalize(&lambda_r, tol) {
            let mut grow = identity(p);
            grow.slice_mut(s![..rank, ..rank]).assign(&y);
            let mut grow_inv = identity(p);
            grow_inv.slice_mut(s![..rank, ..rank]).assign(&y_inv);
            basis = basis.dot(&grow);
            basis_inv = grow_inv.dot(&basis_inv);
            lambda_r = diag;
        }
    }

    // The zero block: wipe the (sub-threshold) diagonal so nilpotency is
    // exact; the reconstruction error this introduces is below rank_tol.
    let mut lambda_0 = t00;
    for i in 0..lambda_0.nrows() {
        lambda_0[[i, i]] = Cx::new(T::zero(), T::zero());
    }

    let cond = cond_1(&basis).unwrap_or(T::infinity());
    let ill_conditioned = !(cond <= tol.cond_max);

    Ok(JordanSplit {
        basis,
        basis_inv,
        lambda_r,
        lambda_0,
        rank,
        ill_conditioned,
        cond,
    })
}

/// Eigen-diagonalize an upper triangular block if its eigenvector basis is
/// well conditioned; returns `(diag, Y, Y⁻¹)`.
fn try_diagonalize<T: RealScalar>(
    t: &CMat<T>,
    tol: &Tolerances<T>,
) -> Option<(CMat<T>, CMat<T>, CMat<T>)> {
    let r = t.nrows();
    let scale = super::basic::max_abs(t).max(T::epsilon());
    let smallnum = scale * T::epsilon();
    let mut y: CMat<T> = Array2::zeros((r, r));
    for i in 0..r {
        let lambda = t[[i, i]];
        let mut col = vec![Cx::new(T::zero(), T::zero()); r];
        col[i] = Cx::new(T::one(), T::zero());
        for k in (0..i).rev() {
            let mut acc = Cx::new(T::zero(), T::zero());
            for j in k + 1..=i {
                acc = acc + t[[k, j]] * col[j];
            }
            let mut den = t[[k, k]] - lambda;
            if den.norm() < smallnum {
                den = Cx::new(smallnum, T::zero());
            }
            col[k] = -acc / den;
        }
        let norm = col.iter().fold(T::zero(), |a, z| a + z.norm_sqr()).sqrt();
        for (k, item) in col.iter().enumerate() {
            y[[k, i]] = *item / re(norm);
        }
    }
    let cond = cond_1(&y).ok()?;
    // Diagonalization is only an accuracy win while the eigenbasis is far
    // better conditioned than the flagging limit; past 1e7 the similarity
    // loses more digits than the triangular form would.
    if cond > tol.cond_max.min(crate::conv(1e7)) {
        return None;
    }
    let y_inv = inverse(&y).ok()?;
    // Residual check: Y⁻¹ T Y must be diagonal to working precision.
    let d = y_inv.dot(t).dot(&y);
    let mut diag: CMat<T> = Array2::zeros((r, r));
    let mut off = T::zero();
    for i in 0..r {
        for j in 0..r {
            if i == j {
                diag[[i, i]] = d[[i, i]];
            } else {
                off = off.max(d[[i, j]].norm());
            }
        }
    }
    let allowed = scale * crate::conv::<T>(1e3) * T::epsilon() * cond;
    if off > allowed.max(tol.num * scale) {
        return None;
    }
    Some((diag, y, y_inv))
}

#[allow(dead_code)]
fn norm_helper<T: RealScalar>(m: &CMat<T>) -> T {
    one_norm(m)
}

#[allow(dead_code)]
fn solve_helper<T: RealScalar>(a: &CMat<T>, b: &CMat<T>) -> Result<CMat<T>> {
    solve(a, b)
}
