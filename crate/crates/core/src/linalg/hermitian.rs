//! Cyclic Jacobi eigendecomposition for complex Hermitian matrices, and the
//! functional calculus built on top of it.

use ndarray::{Array1, Array2};

use super::basic::{adjoint, is_finite_mat, max_abs};
use crate::{re, CMat, Cx, Error, RVec, RealScalar, Result};

/// Eigendecomposition `A = V diag(λ) V†` of a Hermitian matrix.
///
/// Eigenvalues are real and ascending; `vectors` holds the corresponding
/// orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T> {
    pub values: RVec<T>,
    pub vectors: CMat<T>,
}

/// Jacobi eigendecomposition of a Hermitian matrix.
///
/// The Hermitian part `(A + A†)/2` of the input is what gets decomposed;
/// callers are expected to have validated structure beforehand.
pub fn eigh<T: RealScalar>(a: &CMat<T>) -> Result<HermitianEigen<T>> {
    let p = a.nrows();
    assert_eq!(p, a.ncols(), "eigh requires a square matrix");
    if !is_finite_mat(a) {
        return Err(Error::NonFinite);
    }
    if p == 0 {
        return Ok(HermitianEigen {
            values: Array1::zeros(0),
            vectors: Array2::zeros((0, 0)),
        });
    }

    let herm = (a + &adjoint(a)).mapv(|z| z * re(crate::conv::<T>(0.5)));
    let mut m = herm;
    let mut v: CMat<T> = super::basic::identity(p);
    let scale = max_abs(&m).max(T::one());
    let stop = scale * T::epsilon() * crate::conv::<T>(1e-2);

    let max_sweeps = 100;
    for _sweep in 0..max_sweeps {
        let mut off = T::zero();
        for i in 0..p {
            for j in i + 1..p {
                off = off.max(m[[i, j]].norm());
            }
        }
        if off <= stop {
            let mut values = Array1::from_iter((0..p).map(|i| m[[i, i]].re));
            // Sort ascending, permuting the eigenvector columns along.
            let mut order: Vec<usize> = (0..p).collect();
            order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).unwrap());
            let vectors = {
                let mut w = Array2::zeros((p, p));
                for (new_col, &old_col) in order.iter().enumerate() {
                    for row in 0..p {
                        w[[row, new_col]] = v[[row, old_col]];
                    }
                }
                w
            };
            values = Array1::from_iter(order.iter().map(|&i| m[[i, i]].re));
            return Ok(HermitianEigen { values, vectors });
        }

        for pi in 0..p {
            for qi in pi + 1..p {
                let apq = m[[pi, qi]];
                let r = apq.norm();
                if r <= stop * crate::conv::<T>(1e-2) {
                    continue;
                }
                let phase = apq / re(r);
                let tau = (m[[qi, qi]].re - m[[pi, pi]].re) / (crate::conv::<T>(2.0) * r);
                let t = {
                    let sign = if tau < T::zero() { -T::one() } else { T::one() };
                    sign / (tau.abs() + (T::one() + tau * tau).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = phase * re(t * c);

                // Column update: M ← M J with J the plane rotation.
                for k in 0..p {
                    let mkp = m[[k, pi]];
                    let mkq = m[[k, qi]];
                    m[[k, pi]] = mkp * re(c) - mkq * s.conj();
                    m[[k, qi]] = mkp * s + mkq * re(c);
                }
                // Row update: M ← J† M.
                for l in 0..p {
                    let mpl = m[[pi, l]];
                    let mql = m[[qi, l]];
                    m[[pi, l]] = mpl * re(c) - mql * s;
                    m[[qi, l]] = mpl * s.conj() + mql * re(c);
                }
                // Accumulate V ← V J.
                for k in 0..p {
                    let vkp = v[[k, pi]];
                    let vkq = v[[k, qi]];
                    v[[k, pi]] = vkp * re(c) - vkq * s.conj();
                    v[[k, qi]] = vkp * s + vkq * re(c);
                }
                // Clean the pair we just rotated away.
                let fixed = (m[[pi, qi]] + m[[qi, pi]].conj()) * re(crate::conv::<T>(0.5));
                m[[pi, qi]] = fixed - fixed; // exact zero
                m[[qi, pi]] = m[[pi, qi]];
            }
        }
    }
    Err(Error::NoConvergence { terms: max_sweeps })
}

/// Apply a scalar function to a Hermitian matrix through its
/// eigendecomposition: `f(A) = V diag(f(λ)) V†`.
pub fn funm_hermitian<T, F>(a: &CMat<T>, f: F) -> Result<CMat<T>>
where
    T: RealScalar,
    F: Fn(T) -> Cx<T>,
{
    let eigen = eigh(a)?;
    let p = a.nrows();
    let mut scaled = eigen.vectors.clone();
    for (j, lambda) in eigen.values.iter().enumerate() {
        let fl = f(*lambda);
        for i in 0..p {
            scaled[[i, j]] = scaled[[i, j]] * fl;
        }
    }
    Ok(scaled.dot(&adjoint(&eigen.vectors)))
}
