//! Two-point Sylvester (Lagrange) interpolation for the logarithm of a
//! 2×2 matrix with distinct eigenvalues, plus the single-mode symplectic
//! specialization `log S = d₁ S − d₀ I`.

use super::basic::{identity, is_finite_mat};
use crate::tol::Tolerances;
use crate::{re, CMat, Cx, Error, RealScalar, Result};

fn eigenpair_2x2<T: RealScalar>(s: &CMat<T>) -> (Cx<T>, Cx<T>) {
    let half = re(crate::conv::<T>(0.5));
    let tr = (s[[0, 0]] + s[[1, 1]]) * half;
    let det = s[[0, 0]] * s[[1, 1]] - s[[0, 1]] * s[[1, 0]];
    let disc = (tr * tr - det).sqrt();
    (tr + disc, tr - disc)
}

fn principal_log_ok<T: RealScalar>(lambda: Cx<T>, scale: T, tol: &Tolerances<T>) -> Result<()> {
    if lambda.norm() <= tol.rank_rel * scale {
        return Err(Error::Singular("2x2 input has a zero eigenvalue".into()));
    }
    if lambda.re < T::zero() && lambda.im.abs() <= tol.eig_rel * scale {
        return Err(Error::BranchCut {
            re: lambda.re.to_f64().unwrap_or(f64::NAN),
            im: lambda.im.to_f64().unwrap_or(f64::NAN),
            dist: lambda.im.abs().to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

/// Principal logarithm of a 2×2 matrix by Lagrange interpolation on its two
/// (distinct) eigenvalues: `log S = [logλ₊(S − λ₋I) − logλ₋(S − λ₊I)]/(λ₊ − λ₋)`.
pub fn sylvester_log_2x2<T: RealScalar>(s: &CMat<T>, tol: &Tolerances<T>) -> Result<CMat<T>> {
    assert_eq!(s.dim(), (2, 2), "sylvester_log_2x2 requires a 2×2 matrix");
    if !is_finite_mat(s) {
        return Err(Error::NonFinite);
    }
    let (lp, lm) = eigenpair_2x2(s);
    let scale = lp.norm().max(lm.norm()).max(T::epsilon());
    if (lp - lm).norm() <= tol.eig_rel * scale {
        return Err(Error::DegenerateEigenvalues(format!(
            "|λ₊ − λ₋| = {:e}",
            (lp - lm).norm().to_f64().unwrap_or(f64::NAN)
        )));
    }
    principal_log_ok(lp, scale, tol)?;
    principal_log_ok(lm, scale, tol)?;

    let log_p = lp.ln();
    let log_m = lm.ln();
    let den = lp - lm;
    let eye: CMat<T> = identity(2);
    let term_p = (s - &eye.mapv(|z| z * lm)).mapv(|z| z * (log_p / den));
    let term_m = (s - &eye.mapv(|z| z * lp)).mapv(|z| z * (log_m / den));
    Ok(&term_p - &term_m)
}

/// Coefficients `(d₀, d₁)` with `log S = d₁ S − d₀ I` for a 2×2 matrix of
/// unit determinant (single-mode symplectic), using
/// `d₀ = (λ₊²+1)/(λ₊²−1)·log λ₊` and `d₁ = 2λ₊/(λ₊²−1)·log λ₊`.
///
/// Fails with `DegenerateEigenvalues` when `|Re(tr S)/2| = 1` within
/// tolerance, i.e. when the two eigenvalues collide at ±1.
pub fn symplectic_log_coeffs_2x2<T: RealScalar>(
    s: &CMat<T>,
    tol: &Tolerances<T>,
) -> Result<(Cx<T>, Cx<T>)> {
    assert_eq!(s.dim(), (2, 2));
    let det = s[[0, 0]] * s[[1, 1]] - s[[0, 1]] * s[[1, 0]];
    let one = Cx::new(T::one(), T::zero());
    if (det - one).norm() > crate::conv::<T>(1e-6) {
        return Err(Error::StructureViolation(
            "unit-determinant coefficients require det S = 1".into(),
        ));
    }
    let half = re(crate::conv::<T>(0.5));
    let mean = (s[[0, 0]] + s[[1, 1]]) * half;
    // λ₊ = m + √(m² − 1); eigenvalues collide when m = ±1.
    if (mean.norm() - T::one()).abs() <= tol.eig_rel && mean.im.abs() <= tol.eig_rel {
        return Err(Error::DegenerateEigenvalues(
            "trace/2 at ±1: coincident eigenvalues".into(),
        ));
    }
    let disc = (mean * mean - one).sqrt();
    let lp = mean + disc;
    principal_log_ok(lp, lp.norm().max(T::one()), tol)?;
    let log_p = lp.ln();
    let lp2 = lp * lp;
    let d0 = (lp2 + one) / (lp2 - one) * log_p;
    let d1 = (lp + lp) / (lp2 - one) * log_p;
    Ok((d0, d1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{mat_log_principal, max_abs_diff};
    use crate::{im, C64};

    fn tols() -> Tolerances<f64> {
        Tolerances::default()
    }

    #[test]
    fn diagonal_reciprocal_pair() {
        let s = ndarray::array![
            [C64::new(2.0, 0.0), C64::new(0.0, 0.0)],
            [C64::new(0.0, 0.0), C64::new(0.5, 0.0)]
        ];
        let l = sylvester_log_2x2(&s, &tols()).unwrap();
        assert!((l[[0, 0]].re - 2f64.ln()).abs() < 1e-14);
        assert!((l[[1, 1]].re + 2f64.ln()).abs() < 1e-14);
        assert!(l[[0, 1]].norm() < 1e-15);

        let (d0, d1) = symplectic_log_coeffs_2x2(&s, &tols()).unwrap();
        let rec = s.mapv(|z| z * d1) - identity::<f64>(2).mapv(|z| z * d0);
        assert!(max_abs_diff(&rec, &l) < 1e-13);
    }

    #[test]
    fn agrees_with_general_logarithm() {
        // Single-mode rotation+squeeze symplectic matrix.
        let (r, phi, theta) = (0.5f64, 0.3f64, 0.0f64);
        let e = im(phi).exp() * re(r.cosh());
        let f = im(theta - phi).exp() * re(r.sinh());
        let s = ndarray::array![[e, f], [f.conj(), e.conj()]];
        let l_syl = sylvester_log_2x2(&s, &tols()).unwrap();
        let l_gen = mat_log_principal(&s, &tols()).unwrap();
        assert!(max_abs_diff(&l_syl, &l_gen) < 1e-10);
    }

    #[test]
    fn rejects_equal_eigenvalues() {
        let s = ndarray::array![
            [C64::new(1.0, 0.0), C64::new(1.0, 0.0)],
            [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]
        ];
        assert!(matches!(
            sylvester_log_2x2(&s, &tols()),
            Err(Error::DegenerateEigenvalues(_))
        ));
    }
}
