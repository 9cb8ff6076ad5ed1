//! Elementary dense helpers: norms, transposes, Gaussian elimination.

use ndarray::{Array1, Array2};

use crate::{re, CMat, CVec, Cx, Error, RealScalar, Result};

/// Complex identity matrix of order `p`.
pub fn identity<T: RealScalar>(p: usize) -> CMat<T> {
    Array2::from_diag_elem(p, re(T::one()))
}

/// Largest entry magnitude. Zero for empty matrices.
pub fn max_abs<T: RealScalar>(m: &CMat<T>) -> T {
    m.iter().fold(T::zero(), |acc, z| acc.max(z.norm()))
}

/// Largest entry magnitude of a vector.
pub fn max_abs_vec<T: RealScalar>(v: &CVec<T>) -> T {
    v.iter().fold(T::zero(), |acc, z| acc.max(z.norm()))
}

/// `‖a − b‖_max`; panics on shape mismatch.
pub fn max_abs_diff<T: RealScalar>(a: &CMat<T>, b: &CMat<T>) -> T {
    assert_eq!(a.dim(), b.dim(), "max_abs_diff requires equal shapes");
    a.iter()
        .zip(b.iter())
        .fold(T::zero(), |acc, (x, y)| acc.max((*x - *y).norm()))
}

/// Induced 1-norm (maximum column sum of magnitudes).
pub fn one_norm<T: RealScalar>(m: &CMat<T>) -> T {
    let mut best = T::zero();
    for col in m.columns() {
        let s = col.iter().fold(T::zero(), |acc, z| acc + z.norm());
        best = best.max(s);
    }
    best
}

/// Plain transpose.
pub fn transpose<T: RealScalar>(m: &CMat<T>) -> CMat<T> {
    m.t().to_owned()
}

/// Conjugate transpose.
pub fn adjoint<T: RealScalar>(m: &CMat<T>) -> CMat<T> {
    m.t().mapv(|z| z.conj())
}

/// True when every entry is finite.
pub fn is_finite_mat<T: RealScalar>(m: &CMat<T>) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Solve `A X = B` by Gaussian elimination with partial pivoting.
pub fn solve<T: RealScalar>(a: &CMat<T>, b: &CMat<T>) -> Result<CMat<T>> {
    let p = a.nrows();
    assert_eq!(p, a.ncols(), "solve requires a square matrix");
    assert_eq!(p, b.nrows(), "solve requires compatible right-hand side");
    let m = b.ncols();
    if !is_finite_mat(a) || !is_finite_mat(b) {
        return Err(Error::NonFinite);
    }

    let mut lu = a.clone();
    let mut x = b.clone();
    let scale = max_abs(a).max(T::epsilon());
    let tiny = scale * T::epsilon() * crate::conv::<T>(1e2);

    for col in 0..p {
        let mut pivot_row = col;
        let mut pivot_mag = lu[[col, col]].norm();
        for row in col + 1..p {
            let mag = lu[[row, col]].norm();
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = row;
            }
        }
        if pivot_mag <= tiny {
            return Err(Error::Singular(format!(
                "pivot magnitude {:e} below threshold at column {}",
                pivot_mag.to_f64().unwrap_or(f64::NAN),
                col
            )));
        }
        if pivot_row != col {
            for j in 0..p {
                lu.swap([col, j], [pivot_row, j]);
            }
            for j in 0..m {
                x.swap([col, j], [pivot_row, j]);
            }
        }
        let pivot = lu[[col, col]];
        for row in col + 1..p {
            let factor = lu[[row, col]] / pivot;
            if factor.norm() == T::zero() {
                continue;
            }
            for j in col..p {
                let v = lu[[col, j]];
                lu[[row, j]] = lu[[row, j]] - factor * v;
            }
            for j in 0..m {
                let v = x[[col, j]];
                x[[row, j]] = x[[row, j]] - factor * v;
            }
        }
    }

    for col in (0..p).rev() {
        let pivot = lu[[col, col]];
        for j in 0..m {
            let mut sum = x[[col, j]];
            for k in col + 1..p {
                sum = sum - lu[[col, k]] * x[[k, j]];
            }
            x[[col, j]] = sum / pivot;
        }
    }
    Ok(x)
}

/// Solve `X A = B`, i.e. `X = B A⁻¹`, without forming the inverse.
pub fn solve_right<T: RealScalar>(a: &CMat<T>, b: &CMat<T>) -> Result<CMat<T>> {
    // X A = B  ⇔  Aᵀ Xᵀ = Bᵀ
    let xt = solve(&transpose(a), &transpose(b))?;
    Ok(transpose(&xt))
}

/// Matrix inverse via `solve` against the identity.
pub fn inverse<T: RealScalar>(a: &CMat<T>) -> Result<CMat<T>> {
    solve(a, &identity(a.nrows()))
}

/// 1-norm condition number estimate `‖A‖₁·‖A⁻¹‖₁` (exact inverse; the
/// matrices here are tiny).
pub fn cond_1<T: RealScalar>(a: &CMat<T>) -> Result<T> {
    let inv = inverse(a)?;
    Ok(one_norm(a) * one_norm(&inv))
}

/// Solve a linear system with a vector right-hand side.
pub fn solve_vec<T: RealScalar>(a: &CMat<T>, b: &CVec<T>) -> Result<CVec<T>> {
    let col = b.view().insert_axis(ndarray::Axis(1)).to_owned();
    let x = solve(a, &col)?;
    Ok(Array1::from_iter(x.column(0).iter().copied()))
}

#[allow(dead_code)]
fn type_check_helpers<T: RealScalar>(_: Cx<T>) {}
