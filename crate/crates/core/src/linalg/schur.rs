//! Complex Schur decomposition `A = Q T Q†` via Householder reduction to
//! Hessenberg form followed by the shifted QR iteration, plus eigenvector
//! extraction by triangular back-substitution.
//!
//! Written for the small dense matrices this crate handles; no blocking, no
//! balancing, explicit shifted QR steps with Givens rotations.

use ndarray::Array2;

use super::basic::{adjoint, identity, is_finite_mat, max_abs};
use crate::{re, CMat, CVec, Cx, Error, RealScalar, Result};

/// Unitary similarity `A = Q T Q†` with `T` upper triangular.
#[derive(Debug, Clone)]
pub struct Schur<T> {
    pub q: CMat<T>,
    pub t: CMat<T>,
}

impl<T: RealScalar> Schur<T> {
    /// Diagonal of `T`: the eigenvalues of the input matrix.
    pub fn eigenvalues(&self) -> CVec<T> {
        let p = self.t.nrows();
        CVec::from_iter((0..p).map(|i| self.t[[i, i]]))
    }
}

/// Givens rotation `(c, s)` with `c` real such that
/// `[c, conj(s); -s, c]·[x; y] = [r; 0]`.
fn givens<T: RealScalar>(x: Cx<T>, y: Cx<T>) -> (T, Cx<T>) {
    let xn = x.norm();
    let yn = y.norm();
    if yn == T::zero() {
        return (T::one(), Cx::new(T::zero(), T::zero()));
    }
    if xn == T::zero() {
        return (T::zero(), Cx::new(T::one(), T::zero()));
    }
    let r = xn.hypot(yn);
    let c = xn / r;
    let s = y * x.conj() / re(xn * r);
    (c, s)
}

/// Householder reduction to upper Hessenberg form: `A = Q H Q†`.
fn hessenberg<T: RealScalar>(a: &CMat<T>) -> (CMat<T>, CMat<T>) {
    let p = a.nrows();
    let mut h = a.clone();
    let mut q: CMat<T> = identity(p);
    if p < 3 {
        return (q, h);
    }

    for k in 0..p - 2 {
        // Build the reflector that zeroes h[k+2.., k].
        let mut norm_sq = T::zero();
        for i in k + 1..p {
            norm_sq = norm_sq + h[[i, k]].norm_sqr();
        }
        let norm = norm_sq.sqrt();
        if norm == T::zero() {
            continue;
        }
        let x0 = h[[k + 1, k]];
        let phase = if x0.norm() == T::zero() {
            Cx::new(T::one(), T::zero())
        } else {
            x0 / re(x0.norm())
        };
        let alpha = -phase * re(norm);

        let mut v: Vec<Cx<T>> = (k + 1..p).map(|i| h[[i, k]]).collect();
        v[0] = v[0] - alpha;
        let vv = v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr());
        if vv == T::zero() {
            continue;
        }
        let tau = crate::conv::<T>(2.0) / vv;

        // H ← P H with P = I − τ v v† acting on rows k+1..p.
        for col in 0..p {
            let mut dot = Cx::new(T::zero(), T::zero());
            for (idx, row) in (k + 1..p).enumerate() {
                dot = dot + v[idx].conj() * h[[row, col]];
            }
            let dot = dot * re(tau);
            for (idx, row) in (k + 1..p).enumerate() {
                h[[row, col]] = h[[row, col]] - v[idx] * dot;
            }
        }
        // H ← H P acting on columns k+1..p.
        for row in 0..p {
            let mut dot = Cx::new(T::zero(), T::zero());
            for (idx, col) in (k + 1..p).enumerate() {
                dot = dot + h[[row, col]] * v[idx];
            }
            let dot = dot * re(tau);
            for (idx, col) in (k + 1..p).enumerate() {
                h[[row, col]] = h[[row, col]] - dot * v[idx].conj();
            }
        }
        // Q ← Q P.
        for row in 0..p {
            let mut dot = Cx::new(T::zero(), T::zero());
            for (idx, col) in (k + 1..p).enumerate() {
                dot = dot + q[[row, col]] * v[idx];
            }
            let dot = dot * re(tau);
            for (idx, col) in (k + 1..p).enumerate() {
                q[[row, col]] = q[[row, col]] - dot * v[idx].conj();
            }
        }
        for row in k + 2..p {
            h[[row, k]] = Cx::new(T::zero(), T::zero());
        }
    }
    (q, h)
}

/// Complex Schur decomposition.
pub fn schur<T: RealScalar>(a: &CMat<T>) -> Result<Schur<T>> {
    let p = a.nrows();
    assert_eq!(p, a.ncols(), "schur requires a square matrix");
    if !is_finite_mat(a) {
        return Err(Error::NonFinite);
    }
    if p == 0 {
        return Ok(Schur {
            q: Array2::zeros((0, 0)),
            t: Array2::zeros((0, 0)),
        });
    }

    let (mut q, mut h) = hessenberg(a);
    let scale = max_abs(&h).max(T::epsilon());
    let eps = T::epsilon();
    let floor = scale * eps;

    let mut hi = p - 1;
    let mut iters_at_hi = 0usize;
    let mut total_iters = 0usize;
    let max_total = 60 * p.max(1);

    'outer: loop {
        // Deflate converged subdiagonals.
        loop {
            let mut deflated = false;
            for i in 0..hi {
                let sub = h[[i + 1, i]].norm();
                if sub == T::zero() {
                    continue;
                }
                let local = h[[i, i]].norm() + h[[i + 1, i + 1]].norm();
                if sub <= eps * local + floor {
                    h[[i + 1, i]] = Cx::new(T::zero(), T::zero());
                    deflated = true;
                }
            }
            while hi > 0 && h[[hi, hi - 1]].norm() == T::zero() {
                hi -= 1;
                iters_at_hi = 0;
            }
            if hi == 0 {
                break 'outer;
            }
            if !deflated {
                break;
            }
        }

        // Active window [lo..=hi].
        let mut lo = hi;
        while lo > 0 && h[[lo, lo - 1]].norm() != T::zero() {
            lo -= 1;
        }

        // Shift: Wilkinson from the trailing 2×2, with an occasional
        // exceptional shift to break symmetry-induced cycles.
        total_iters += 1;
        iters_at_hi += 1;
        if total_iters > max_total {
            return Err(Error::NoConvergence { terms: max_total });
        }
        let mu = if iters_at_hi % 13 == 0 {
            h[[hi, hi]] + re(h[[hi, hi - 1]].norm() * crate::conv::<T>(0.75))
        } else {
            let a11 = h[[hi - 1, hi - 1]];
            let a12 = h[[hi - 1, hi]];
            let a21 = h[[hi, hi - 1]];
            let a22 = h[[hi, hi]];
            let half = re(crate::conv::<T>(0.5));
            let tr = (a11 + a22) * half;
            let det = a11 * a22 - a12 * a21;
            let disc = (tr * tr - det).sqrt();
            let l1 = tr + disc;
            let l2 = tr - disc;
            if (l1 - a22).norm() < (l2 - a22).norm() {
                l1
            } else {
                l2
            }
        };

        // Explicit shifted QR step on the active window:
        //   H − μI = G₀†G₁†…R  (row rotations), then H ← R G₀G₁… + μI.
        let mut rots: Vec<(T, Cx<T>)> = Vec::with_capacity(hi - lo);
        for i in lo..=hi {
            h[[i, i]] = h[[i, i]] - mu;
        }
        for k in lo..hi {
            let (c, s) = givens(h[[k, k]], h[[k + 1, k]]);
            rots.push((c, s));
            for col in k..p {
                let hk = h[[k, col]];
                let hk1 = h[[k + 1, col]];
                h[[k, col]] = hk * re(c) + hk1 * s.conj();
                h[[k + 1, col]] = hk1 * re(c) - hk * s;
            }
            h[[k + 1, k]] = Cx::new(T::zero(), T::zero());
        }
        for (k, (c, s)) in (lo..hi).zip(rots.iter()) {
            let top = (k + 2).min(hi) + 1;
            for row in 0..top {
                let hk = h[[row, k]];
                let hk1 = h[[row, k + 1]];
                h[[row, k]] = hk * re(*c) + hk1 * *s;
                h[[row, k + 1]] = hk1 * re(*c) - hk * s.conj();
            }
            for row in 0..p {
                let qk = q[[row, k]];
                let qk1 = q[[row, k + 1]];
                q[[row, k]] = qk * re(*c) + qk1 * *s;
                q[[row, k + 1]] = qk1 * re(*c) - qk * s.conj();
            }
        }
        for i in lo..=hi {
            h[[i, i]] = h[[i, i]] + mu;
        }
    }

    // Clean the strictly lower part.
    for i in 0..p {
        for j in 0..i {
            h[[i, j]] = Cx::new(T::zero(), T::zero());
        }
    }
    Ok(Schur { q, t: h })
}

/// Eigenvalues and (right) eigenvectors.
///
/// Eigenvectors come from back-substitution on the Schur factor; for
/// defective matrices the returned basis is ill-conditioned, which callers
/// detect through its condition number.
pub fn eig<T: RealScalar>(a: &CMat<T>) -> Result<(CVec<T>, CMat<T>)> {
    let dec = schur(a)?;
    let p = a.nrows();
    let values = dec.eigenvalues();
    let scale = max_abs(&dec.t).max(T::epsilon());
    let smallnum = scale * T::epsilon();

    let mut vecs: CMat<T> = Array2::zeros((p, p));
    for i in 0..p {
        let lambda = values[i];
        let mut y = vec![Cx::new(T::zero(), T::zero()); p];
        y[i] = Cx::new(T::one(), T::zero());
        for k in (0..i).rev() {
            let mut acc = Cx::new(T::zero(), T::zero());
            for j in k + 1..=i {
                acc = acc + dec.t[[k, j]] * y[j];
            }
            let mut den = dec.t[[k, k]] - lambda;
            if den.norm() < smallnum {
                den = Cx::new(smallnum, T::zero());
            }
            y[k] = -acc / den;
        }
        let norm = y.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
        for item in y.iter_mut() {
            *item = *item / re(norm);
        }
        for k in 0..p {
            vecs[[k, i]] = y[k];
        }
    }
    Ok((values, dec.q.dot(&vecs)))
}

#[allow(dead_code)]
fn unused_adjoint_reference<T: RealScalar>(m: &CMat<T>) -> CMat<T> {
    adjoint(m)
}
