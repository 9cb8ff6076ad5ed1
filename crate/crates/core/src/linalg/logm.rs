//! Principal matrix logarithm by inverse scaling-and-squaring on the Schur
//! factor: repeated triangular square roots bring the spectrum near 1,
//! where a Gauss–Legendre quadrature of `log(I+X) = ∫₀¹ X(I+tX)⁻¹ dt`
//! finishes the job.

use super::basic::{adjoint, identity, is_finite_mat, one_norm, solve};
use super::schur::schur;
use crate::tol::Tolerances;
use crate::{re, CMat, Cx, Error, RealScalar, Result};

// 8-point Gauss–Legendre nodes/weights on [0, 1].
const GL_NODES: [f64; 8] = [
    0.019855071751231884,
    0.10166676129318664,
    0.2372337950418355,
    0.40828267875217505,
    0.591717321247825,
    0.7627662049581645,
    0.8983332387068134,
    0.9801449282487681,
];
const GL_WEIGHTS: [f64; 8] = [
    0.05061426814518813,
    0.11119051722668723,
    0.15685332293894372,
    0.18134189168918097,
    0.18134189168918097,
    0.15685332293894372,
    0.11119051722668723,
    0.05061426814518813,
];

// ‖T − I‖₁ threshold at which the 8-point quadrature reaches double
// precision.
const UNIT_BALL: f64 = 0.2;

/// Principal square root of an upper triangular matrix with no eigenvalue
/// on the closed negative real axis (Björck–Hammarling recurrence).
fn sqrtm_triangular<T: RealScalar>(t: &CMat<T>) -> CMat<T> {
    let p = t.nrows();
    let mut u: CMat<T> = CMat::zeros((p, p));
    for i in 0..p {
        u[[i, i]] = t[[i, i]].sqrt();
    }
    for d in 1..p {
        for i in 0..p - d {
            let j = i + d;
            let mut acc = t[[i, j]];
            for k in i + 1..j {
                acc = acc - u[[i, k]] * u[[k, j]];
            }
            u[[i, j]] = acc / (u[[i, i]] + u[[j, j]]);
        }
    }
    u
}

/// Quadrature evaluation of `log(I + X)`.
fn log_near_identity<T: RealScalar>(x: &CMat<T>) -> Result<CMat<T>> {
    let p = x.nrows();
    let mut acc: CMat<T> = CMat::zeros((p, p));
    let eye = identity(p);
    for (node, weight) in GL_NODES.iter().zip(GL_WEIGHTS.iter()) {
        let node_t = re(crate::conv::<T>(*node));
        let shifted = &eye + &x.mapv(|z| z * node_t);
        let term = solve(&shifted, x)?;
        let w = re(crate::conv::<T>(*weight));
        acc = acc + term.mapv(|z| z * w);
    }
    Ok(acc)
}

/// Principal matrix logarithm.
///
/// Requires an invertible input with no eigenvalue on the closed negative
/// real axis; returns `BranchCut`/`Singular` otherwise. The result
/// satisfies `e^{log M} = M` and has eigenvalue imaginary parts in
/// `(-π, π]`.
pub fn mat_log_principal<T: RealScalar>(m: &CMat<T>, tol: &Tolerances<T>) -> Result<CMat<T>> {
    let p = m.nrows();
    assert_eq!(p, m.ncols(), "mat_log_principal requires a square matrix");
    if !is_finite_mat(m) {
        return Err(Error::NonFinite);
    }
    if p == 0 {
        return Ok(CMat::zeros((0, 0)));
    }

    let dec = schur(m)?;
    let eigs = dec.eigenvalues();
    let scale = eigs.iter().fold(T::zero(), |acc, z| acc.max(z.norm()));
    if scale == T::zero() {
        return Err(Error::Singular("all eigenvalues vanish".into()));
    }
    for lambda in eigs.iter() {
        if lambda.norm() <= tol.rank_rel * scale {
            return Err(Error::Singular(format!(
                "eigenvalue magnitude {:e} below rank threshold",
                lambda.norm().to_f64().unwrap_or(f64::NAN)
            )));
        }
        if lambda.re < T::zero() && lambda.im.abs() <= tol.eig_rel * scale {
            return Err(Error::BranchCut {
                re: lambda.re.to_f64().unwrap_or(f64::NAN),
                im: lambda.im.to_f64().unwrap_or(f64::NAN),
                dist: lambda.im.abs().to_f64().unwrap_or(f64::NAN),
            });
        }
    }

    let mut t = dec.t.clone();
    let eye = identity(p);
    let ball = crate::conv::<T>(UNIT_BALL);
    let mut roots = 0u32;
    let max_roots = 60;
    while one_norm(&(&t - &eye)) > ball {
        t = sqrtm_triangular(&t);
        roots += 1;
        if roots > max_roots {
            return Err(Error::NoConvergence {
                terms: max_roots as usize,
            });
        }
    }

    let x = &t - &eye;
    let mut log_t = log_near_identity(&x)?;
    let factor = re(crate::conv::<T>(2f64.powi(roots as i32)));
    log_t = log_t.mapv(|z| z * factor);

    Ok(dec.q.dot(&log_t).dot(&adjoint(&dec.q)))
}

#[allow(dead_code)]
fn silence_unused<T: RealScalar>(_: Cx<T>) {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{mat_exp, max_abs_diff};
    use crate::{im, C64};

    #[test]
    fn log_of_identity_is_zero() {
        let m = identity::<f64>(3);
        let l = mat_log_principal(&m, &Tolerances::default()).unwrap();
        assert!(crate::linalg::max_abs(&l) < 1e-14);
    }

    #[test]
    fn log_of_unitary_diagonal() {
        let phi = 0.3f64;
        let m = ndarray::array![
            [im(phi).exp(), C64::new(0.0, 0.0)],
            [C64::new(0.0, 0.0), im(-phi).exp()]
        ];
        let l = mat_log_principal(&m, &Tolerances::default()).unwrap();
        assert!((l[[0, 0]] - im(phi)).norm() < 1e-14);
        assert!((l[[1, 1]] - im(-phi)).norm() < 1e-14);
    }

    #[test]
    fn exp_log_roundtrip_structured() {
        // A squeeze-plus-rotation generator with spectrum well inside the
        // principal branch.
        let c = ndarray::array![
            [im(0.3), C64::new(0.5, 0.2)],
            [C64::new(0.5, -0.2), im(-0.3)]
        ];
        let s = mat_exp(&c).unwrap();
        let l = mat_log_principal(&s, &Tolerances::default()).unwrap();
        assert!(max_abs_diff(&l, &c) < 1e-9);
    }

    #[test]
    fn log_handles_defective_input() {
        // exp of a Jordan block is defective with a known logarithm.
        let j = ndarray::array![
            [C64::new(0.1, 0.0), C64::new(1.0, 0.0)],
            [C64::new(0.0, 0.0), C64::new(0.1, 0.0)]
        ];
        let s = mat_exp(&j).unwrap();
        let l = mat_log_principal(&s, &Tolerances::default()).unwrap();
        assert!(max_abs_diff(&l, &j) < 1e-10);
    }

    #[test]
    fn rejects_negative_real_eigenvalue() {
        let m = ndarray::array![
            [C64::new(-2.0, 0.0), C64::new(0.0, 0.0)],
            [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]
        ];
        assert!(matches!(
            mat_log_principal(&m, &Tolerances::default()),
            Err(Error::BranchCut { .. })
        ));
    }

    #[test]
    fn rejects_singular() {
        let m = ndarray::array![
            [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
            [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]
        ];
        assert!(matches!(
            mat_log_principal(&m, &Tolerances::default()),
            Err(Error::Singular(_))
        ));
    }

    #[test]
    fn log_with_large_spread_needs_many_roots() {
        let m = ndarray::array![
            [C64::new(40.0, 0.0), C64::new(3.0, 1.0)],
            [C64::new(0.0, 0.0), C64::new(0.025, 0.0)]
        ];
        let l = mat_log_principal(&m, &Tolerances::default()).unwrap();
        let back = mat_exp(&l).unwrap();
        assert!(max_abs_diff(&back, &m) < 1e-10);
    }
}
