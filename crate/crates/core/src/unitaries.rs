//! Builders and closed forms for the fundamental Gaussian unitaries —
//! displacement, rotation, squeezing — their Hamiltonian representations,
//! cascades, and the single- and two-mode inverse evaluations.

use ndarray::{s, Array1, Array2};

use crate::linalg::{
    funm_hermitian, identity, inverse, max_abs, max_abs_diff, polar_decompose_squeeze, solve,
    symplectic_log_coeffs_2x2, transpose,
};
use crate::model::{omega, Hamiltonian, PsiMatrix, SymplecticPair};
use crate::tol::Tolerances;
use crate::transform::singular_psi;
use crate::{im, re, CMat, CVec, Cx, Error, RealScalar, Result};

/// Parameter record for one fundamental Gaussian unitary.
#[derive(Debug, Clone, PartialEq)]
pub enum FundamentalUnitary<T> {
    /// `D(α)`: n-mode displacement.
    Displacement { alpha: CVec<T> },
    /// `R(φ)`: n-mode rotation, `φ` Hermitian.
    Rotation { phi: CMat<T> },
    /// `Z(z)`: n-mode squeeze, `z` symmetric.
    Squeeze { z: CMat<T> },
}

impl<T: RealScalar> FundamentalUnitary<T> {
    pub fn modes(&self) -> usize {
        match self {
            Self::Displacement { alpha } => alpha.len(),
            Self::Rotation { phi } => phi.nrows(),
            Self::Squeeze { z } => z.nrows(),
        }
    }

    /// Structural validation: `φ` Hermitian, `z` symmetric.
    pub fn validate(&self, tol: &Tolerances<T>) -> Result<()> {
        match self {
            Self::Displacement { alpha } => {
                if alpha.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                    return Err(Error::NonFinite);
                }
                Ok(())
            }
            Self::Rotation { phi } => {
                let scale = max_abs(phi).max(T::one());
                let err = max_abs_diff(phi, &crate::linalg::adjoint(phi));
                if err > tol.structure * scale {
                    return Err(Error::StructureViolation(
                        "rotation matrix must be Hermitian".into(),
                    ));
                }
                Ok(())
            }
            Self::Squeeze { z } => {
                let scale = max_abs(z).max(T::one());
                let err = max_abs_diff(z, &transpose(z));
                if err > tol.structure * scale {
                    return Err(Error::StructureViolation(
                        "squeeze matrix must be symmetric".into(),
                    ));
                }
                Ok(())
            }
        }
    }
}

/// Hamiltonian representation of one fundamental unitary:
/// displacement → `h = iα`; rotation → `A = −φ`; squeeze → `B = iz`.
pub fn hamiltonian_of<T: RealScalar>(
    params: &FundamentalUnitary<T>,
    tol: &Tolerances<T>,
) -> Result<Hamiltonian<T>> {
    params.validate(tol)?;
    let n = params.modes();
    match params {
        FundamentalUnitary::Displacement { alpha } => Hamiltonian::new(
            Array2::zeros((n, n)),
            Array2::zeros((n, n)),
            alpha.mapv(|a| a * im(T::one())),
            tol,
        ),
        FundamentalUnitary::Rotation { phi } => Hamiltonian::new(
            phi.mapv(|z| -z),
            Array2::zeros((n, n)),
            Array1::zeros(n),
            tol,
        ),
        FundamentalUnitary::Squeeze { z } => Hamiltonian::new(
            Array2::zeros((n, n)),
            z.mapv(|w| w * im(T::one())),
            Array1::zeros(n),
            tol,
        ),
    }
}

/// Closed form for rotation + displacement:
/// `S = diag(e^{iφ}, e^{-iφᵀ})`, `P = −(e^{iφ} − I)φ⁻¹`, `Q = 0`,
/// `s = Ph`.
///
/// The aperiodic Ψ is valid only for eigenvalues of `φ` inside `[-π, π)`;
/// anything outside is rejected with `OutOfPeriod`. A singular `φ` routes
/// through the Jordan-split engine path instead of the closed form.
pub fn rotation_closed_form<T: RealScalar>(
    phi: &CMat<T>,
    h: &CVec<T>,
    tol: &Tolerances<T>,
) -> Result<(SymplecticPair<T>, PsiMatrix<T>)> {
    let params = FundamentalUnitary::Rotation { phi: phi.clone() };
    params.validate(tol)?;
    let n = phi.nrows();
    if h.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: h.len(),
        });
    }

    let eigen = crate::linalg::eigh(phi)?;
    let pi = T::PI();
    for lambda in eigen.values.iter() {
        if *lambda < -pi || *lambda >= pi {
            return Err(Error::OutOfPeriod {
                value: lambda.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    let scale = eigen
        .values
        .iter()
        .fold(T::zero(), |acc, v| acc.max(v.abs()));
    let singular = eigen
        .values
        .iter()
        .any(|v| v.abs() <= tol.rank_rel * scale.max(T::one()));

    let e = funm_hermitian(phi, |x| im(x).exp())?;
    let f: CMat<T> = Array2::zeros((n, n));

    let psi = if singular {
        let ham = hamiltonian_of(&params, tol)?;
        singular_psi(&ham, tol)?
    } else {
        // P = −(e^{iφ} − I)φ⁻¹ evaluated as the eigenfunction in its
        // cancellation-free form −i e^{iλ/2} sin(λ/2)/(λ/2).
        let half = crate::conv::<T>(0.5);
        let p = funm_hermitian(phi, |x| {
            let xh = x * half;
            let sinc = if xh == T::zero() { T::one() } else { xh.sin() / xh };
            im(-T::one()) * im(xh).exp() * re(sinc)
        })?;
        PsiMatrix::new(p, Array2::zeros((n, n)))?
    };

    let shift = psi.displacement(h)?;
    let pair = SymplecticPair::new(e, f, shift, tol)?;
    Ok((pair, psi))
}

/// Closed form for squeezing + displacement with `z = r e^{iθ}`:
/// `S = [[cosh r, sinh r e^{iθ}],[…]]`, `P = sinh(r)e^{iθ}(−iz⁻¹)`,
/// `Q = (cosh r − I)·i·z̄⁻¹`, `s = Ph + Qh̄`.
///
/// A singular `z` routes Ψ through the engine's Jordan path.
pub fn squeeze_closed_form<T: RealScalar>(
    z: &CMat<T>,
    h: &CVec<T>,
    tol: &Tolerances<T>,
) -> Result<(SymplecticPair<T>, PsiMatrix<T>)> {
    let params = FundamentalUnitary::Squeeze { z: z.clone() };
    params.validate(tol)?;
    let n = z.nrows();
    if h.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: h.len(),
        });
    }

    let polar = polar_decompose_squeeze(z, tol)?;
    let cosh_r = funm_hermitian(&polar.modulus, |x| re(x.cosh()))?;
    let sinh_r = funm_hermitian(&polar.modulus, |x| re(x.sinh()))?;
    let exp_itheta = funm_hermitian(&polar.phase, |x| im(x).exp())?;
    let e = cosh_r.clone();
    let f = sinh_r.dot(&exp_itheta);

    let psi = if polar.degenerate {
        let ham = hamiltonian_of(&params, tol)?;
        singular_psi(&ham, tol)?
    } else {
        let z_inv = inverse(z)?;
        let minus_i = im(-T::one());
        let p = f.dot(&z_inv).mapv(|w| w * minus_i);
        let zbar_inv = z_inv.mapv(|w| w.conj());
        let q = (&cosh_r - &identity(n))
            .dot(&zbar_inv)
            .mapv(|w| w * im(T::one()));
        PsiMatrix::new(p, q)?
    };

    let shift = psi.displacement(h)?;
    let pair = SymplecticPair::new(e, f, shift, tol)?;
    Ok((pair, psi))
}

/// The symplectic matrix of the general Gaussian unitary built from a
/// squeeze `z = r e^{iθ}` following a rotation `φ`:
/// `E = cosh(r)e^{iφ}`, `F = sinh(r)e^{iθ}e^{-iφᵀ}`.
///
/// Equals the exponential product `e^{-iΩH_sq}·e^{-iΩH_rot}`.
pub fn general_symplectic<T: RealScalar>(
    z: &CMat<T>,
    phi: &CMat<T>,
    tol: &Tolerances<T>,
) -> Result<SymplecticPair<T>> {
    FundamentalUnitary::Squeeze { z: z.clone() }.validate(tol)?;
    FundamentalUnitary::Rotation { phi: phi.clone() }.validate(tol)?;
    let n = z.nrows();
    if phi.nrows() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: phi.nrows(),
        });
    }

    let polar = polar_decompose_squeeze(z, tol)?;
    let cosh_r = funm_hermitian(&polar.modulus, |x| re(x.cosh()))?;
    let sinh_r = funm_hermitian(&polar.modulus, |x| re(x.sinh()))?;
    let exp_itheta = funm_hermitian(&polar.phase, |x| im(x).exp())?;
    let exp_iphi = funm_hermitian(phi, |x| im(x).exp())?;
    // e^{-iφᵀ} is the elementwise conjugate of e^{iφ} for Hermitian φ.
    let exp_minus_iphit = exp_iphi.mapv(|w| w.conj());

    let e = cosh_r.dot(&exp_iphi);
    let f = sinh_r.dot(&exp_itheta).dot(&exp_minus_iphit);
    SymplecticPair::new(e, f, Array1::zeros(n), tol)
}

/// Displacement coefficients `(P, Q)` of a single-mode symplectic matrix
/// from its Bogoliubov entries via the eigenvalue-interpolation closed
/// form, with `Δ = √(Re(E)² − 1)` and the log-ratio
/// `log[(Re(E) − Δ)/(Re(E) + Δ)]`.
pub fn single_mode_pq_sylvester<T: RealScalar>(
    e: Cx<T>,
    f: Cx<T>,
    tol: &Tolerances<T>,
) -> Result<(Cx<T>, Cx<T>)> {
    let u = e.re;
    if (u.abs() - T::one()).abs() <= tol.eig_rel {
        return Err(Error::DegenerateEigenvalues(format!(
            "|Re(E)| = {} at the interpolation boundary",
            u.abs().to_f64().unwrap_or(f64::NAN)
        )));
    }
    let one = Cx::new(T::one(), T::zero());
    let u_c = Cx::new(u, T::zero());
    let delta = (u_c * u_c - one).sqrt();
    // log[(u − Δ)/(u + Δ)] evaluated as −2 log(u + Δ): the eigenvalues are
    // a reciprocal pair, so the paired-branch logarithm keeps the ratio
    // log consistent across the whole trace range (a principal log of the
    // ratio itself would wrap for Re(E) < 0).
    let log_ratio = -(u_c + delta).ln() * re(crate::conv::<T>(2.0));
    let denom = u + T::one();
    if denom.abs() <= tol.den {
        return Err(Error::NearDivergence {
            denom: denom.abs().to_f64().unwrap_or(f64::NAN),
            guard: tol.den.to_f64().unwrap_or(f64::NAN),
        });
    }
    let two_i = im(crate::conv::<T>(2.0));
    let p = two_i * delta * (one + e) / (log_ratio * re(denom));
    let q = -two_i * delta * f / (log_ratio * re(denom));
    Ok((p, q))
}

/// Single-mode inverse through Sylvester interpolation: recovers the
/// Hamiltonian as `H = iΩ(d₁S − d₀I)` and the displacement coefficients
/// `(P, Q)`.
pub fn single_mode_sylvester<T: RealScalar>(
    pair: &SymplecticPair<T>,
    tol: &Tolerances<T>,
) -> Result<(Hamiltonian<T>, Cx<T>, Cx<T>)> {
    if pair.modes() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: pair.modes(),
        });
    }
    let s_full = pair.full_matrix();
    let (d0, d1) = symplectic_log_coeffs_2x2(&s_full, tol)?;
    let log_s = s_full.mapv(|w| w * d1) - identity::<T>(2).mapv(|w| w * d0);
    let i_omega = omega::<T>(1).mapv(|w| w * im(T::one()));
    let h_full = i_omega.dot(&log_s);
    let ham = Hamiltonian::from_full(&h_full, &CVec::zeros(2), tol)?;
    let (p, q) = single_mode_pq_sylvester(pair.e()[[0, 0]], pair.f()[[0, 0]], tol)?;
    Ok((ham, p, q))
}

/// Alternative single-mode evaluation of the displacement coefficients
/// through the parameter `T = arccosh(cos φ · cosh r)`, continued as
/// `i·arccos(cos φ · cosh r)` below 1. Returns `(P, Q, T)`.
///
/// The `T → 0` limit is handled through the even series of `sinh(T)/T`.
pub fn single_mode_pq_direct<T: RealScalar>(
    r: T,
    theta: T,
    phi: T,
    tol: &Tolerances<T>,
) -> Result<(Cx<T>, Cx<T>, Cx<T>)> {
    let u = phi.cos() * r.cosh();
    let u_c = Cx::new(u, T::zero());
    let one = Cx::new(T::one(), T::zero());
    let t_param = u_c.acosh();
    let w = u_c * u_c - one; // sinh²(T)
    // sinh(T)/T, safe through T = 0. Evaluated from T itself so the branch
    // stays tied to acosh (a separate √(u²−1) can land on the wrong side
    // of the cut through the sign of a zero imaginary part).
    let sinch = if w.norm() < crate::conv::<T>(1e-4) {
        let c6 = re(crate::conv::<T>(1.0 / 6.0));
        let c120 = re(crate::conv::<T>(1.0 / 120.0));
        let c5040 = re(crate::conv::<T>(1.0 / 5040.0));
        one + w * c6 + w * w * c120 + w * w * w * c5040
    } else {
        t_param.sinh() / t_param
    };

    let cosh_t = u_c;
    let cosh_r = re(r.cosh());
    let sinh_r = re(r.sinh());
    let eip = im(phi).exp();
    // The denominator sinh²r + (cosh T − e^{iφ}cosh r)² equals u² − 1
    // identically, so it vanishes at both u = ±1. Only u = −1 is a true
    // divergence; u = +1 is removable (the T → 0 point).
    if (u + T::one()).abs() <= tol.den {
        return Err(Error::NearDivergence {
            denom: (u + T::one()).abs().to_f64().unwrap_or(f64::NAN),
            guard: tol.den.to_f64().unwrap_or(f64::NAN),
        });
    }

    let (p, q) = if (u - T::one()).abs() < crate::conv::<T>(1e-3) {
        // Cancellation-free reduction near the removable point:
        // P = −i·(sinh T/T)(1 + E)/(u + 1), Q = i·(sinh T/T)·F/(u + 1).
        let e_entry = eip * cosh_r;
        let f_entry = im(theta - phi).exp() * sinh_r;
        let u1 = re(u + T::one());
        let p = -im(T::one()) * sinch * (one + e_entry) / u1;
        let q = im(T::one()) * sinch * f_entry / u1;
        (p, q)
    } else {
        let core = sinh_r * sinh_r + (cosh_t - eip * cosh_r) * (cosh_t - eip * cosh_r);
        let numer_p = -im(T::one())
            * sinch
            * (-eip * cosh_r * (cosh_t + one) + eip * eip * cosh_r * cosh_r + sinh_r * sinh_r
                + cosh_t);
        let p = numer_p / core;
        let q = im(T::one()) * im(theta - phi).exp() * sinh_r * sinch * (cosh_t - one) / core;
        (p, q)
    };
    Ok((p, q, t_param))
}

/// Result bundle of the two-mode beam-splitter + two-mode-squeezer closed
/// form.
#[derive(Debug, Clone)]
pub struct TwoModeBsSqueeze<T> {
    pub pair: SymplecticPair<T>,
    pub ham: Hamiltonian<T>,
    pub p: CMat<T>,
    pub q: CMat<T>,
}

/// Closed-form chain for the beam splitter (angle `β`) followed by a
/// two-mode squeezer (`r`, `θ`): the product symplectic matrix, the single
/// Hamiltonian through the degree-3 eigenvalue-interpolation polynomial
/// `log S = Σ_m d_m S^m`, and the displacement blocks `P`, `Q` from
/// `Ψ = (S − I)H⁻¹`.
pub fn two_mode_bs_squeeze<T: RealScalar>(
    beta: T,
    r: T,
    theta: T,
    tol: &Tolerances<T>,
) -> Result<TwoModeBsSqueeze<T>> {
    let (cb, sb) = (beta.cos(), beta.sin());
    let (ch, sh) = (r.cosh(), r.sinh());
    let eith = im(theta).exp();

    // Beam splitter: E(β) is the real rotation block, F = 0.
    let e_b = ndarray::array![[re(cb), re(sb)], [re(-sb), re(cb)]];
    // Two-mode squeezer: E = cosh(r)·I, F = e^{iθ} sinh(r)·antidiag.
    let f_c = ndarray::array![
        [Cx::new(T::zero(), T::zero()), eith * sh],
        [eith * sh, Cx::new(T::zero(), T::zero())]
    ];
    let sb_pair = SymplecticPair::new(e_b, Array2::zeros((2, 2)), Array1::zeros(2), tol)?;
    let sc_pair = SymplecticPair::new(
        identity::<T>(2).mapv(|w| w * re(ch)),
        f_c,
        Array1::zeros(2),
        tol,
    )?;
    let s_full = sc_pair.full_matrix().dot(&sb_pair.full_matrix());
    let pair = SymplecticPair::from_full(&s_full, &CVec::zeros(4), tol)?;

    // Double eigenvalues μ₁, μ₂ of S.
    let half = re(crate::conv::<T>(0.5));
    let two = crate::conv::<T>(2.0);
    let three = crate::conv::<T>(3.0);
    let disc = (re(two * cb * cb * (two * r).cosh() + (two * beta).cos() - three)).sqrt();
    let base = re(cb * ch);
    let mu1 = base - half * disc;
    let mu2 = base + half * disc;
    let scale = mu1.norm().max(mu2.norm());
    if (mu1 - mu2).norm() <= tol.eig_rel * scale {
        return Err(Error::DegenerateEigenvalues(
            "two-mode product has coincident eigenvalue pairs".into(),
        ));
    }
    for mu in [mu1, mu2] {
        if mu.re < T::zero() && mu.im.abs() <= tol.eig_rel * scale {
            return Err(Error::BranchCut {
                re: mu.re.to_f64().unwrap_or(f64::NAN),
                im: mu.im.to_f64().unwrap_or(f64::NAN),
                dist: mu.im.abs().to_f64().unwrap_or(f64::NAN),
            });
        }
    }

    // Hermite interpolation of log at {μ₁, μ₂}, each with multiplicity 2.
    let (lg1, lg2) = (mu1.ln(), mu2.ln());
    let dmu = mu1 - mu2;
    let dmu3 = dmu * dmu * dmu;
    let mu1sq = mu1 * mu1;
    let mu2sq = mu2 * mu2;
    let three_c = re(three);
    let six = re(crate::conv::<T>(6.0));
    let two_c = re(two);
    let d0 = (-dmu * (mu1sq + mu2sq)
        + (mu1 - three_c * mu2) * mu1sq * lg2
        + (three_c * mu1 - mu2) * mu2sq * lg1)
        / dmu3;
    let d1 = (dmu * (mu1 + mu2) * (mu1sq + mu1 * mu2 + mu2sq) + six * mu1sq * mu2sq * (lg2 - lg1))
        / (mu1 * dmu3 * mu2);
    let d2 = (-two_c * mu1 * mu1sq + two_c * mu2 * mu2sq
        + three_c * mu2 * (mu1 + mu2) * mu1 * (lg1 - lg2))
        / (mu1 * dmu3 * mu2);
    let d3 = (mu1sq - mu2sq + two_c * mu2 * mu1 * (lg2 - lg1)) / (mu1 * dmu3 * mu2);

    let s2 = s_full.dot(&s_full);
    let s3 = s2.dot(&s_full);
    let log_s = identity::<T>(4).mapv(|w| w * d0)
        + s_full.mapv(|w| w * d1)
        + s2.mapv(|w| w * d2)
        + s3.mapv(|w| w * d3);
    let i_omega = omega::<T>(2).mapv(|w| w * im(T::one()));
    let h_full = i_omega.dot(&log_s);
    let ham = Hamiltonian::from_full(&h_full, &CVec::zeros(4), tol)?;

    // Ψ = (S − I)H⁻¹ from the closed-form S and H.
    let rhs = (&s_full - &identity(4)).t().mapv(|w| w.conj());
    let psi_adj = solve(&h_full, &rhs)?;
    let psi_full = psi_adj.t().mapv(|w| w.conj());
    let psi = PsiMatrix::from_full(&psi_full, tol)?;

    Ok(TwoModeBsSqueeze {
        pair,
        ham,
        p: psi.p().clone(),
        q: psi.q().clone(),
    })
}

/// Cascade of fundamental unitaries, applied in list order.
pub type CascadeSpec<T> = Vec<FundamentalUnitary<T>>;

/// Compose a cascade: with `compose(&[U_a, U_b])` the result has
/// `S = S_b·S_a` and shift `S_b s_a + s_b` (list order is application
/// order).
pub fn compose<T: RealScalar>(
    cascade: &[FundamentalUnitary<T>],
    tol: &Tolerances<T>,
) -> Result<SymplecticPair<T>> {
    let n = match cascade.first() {
        Some(first) => first.modes(),
        None => {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: 0,
            })
        }
    };
    let mut acc_s = identity::<T>(2 * n);
    let mut acc_shift: CVec<T> = Array1::zeros(2 * n);

    for element in cascade {
        element.validate(tol)?;
        if element.modes() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: element.modes(),
            });
        }
        let (step_s, step_shift) = match element {
            FundamentalUnitary::Displacement { alpha } => {
                let mut shift: CVec<T> = Array1::zeros(2 * n);
                for i in 0..n {
                    shift[i] = alpha[i];
                    shift[n + i] = alpha[i].conj();
                }
                (identity::<T>(2 * n), shift)
            }
            FundamentalUnitary::Rotation { phi } => {
                let (pair, _) = rotation_closed_form(phi, &Array1::zeros(n), tol)?;
                (pair.full_matrix(), Array1::zeros(2 * n))
            }
            FundamentalUnitary::Squeeze { z } => {
                let (pair, _) = squeeze_closed_form(z, &Array1::zeros(n), tol)?;
                (pair.full_matrix(), Array1::zeros(2 * n))
            }
        };
        acc_shift = step_s.dot(&acc_shift) + &step_shift;
        acc_s = step_s.dot(&acc_s);
    }
    SymplecticPair::from_full(&acc_s, &acc_shift, tol)
}

#[allow(dead_code)]
fn slice_anchor<T: RealScalar>(m: &CMat<T>) -> CMat<T> {
    m.slice(s![.., ..]).to_owned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::{forward_transform, inverse_hamiltonian, psi_series_oracle};
    use crate::{C64, CMat64, CVec64};

    fn tols() -> Tolerances<f64> {
        Tolerances::default()
    }

    fn c(re: f64, imv: f64) -> C64 {
        C64::new(re, imv)
    }

    #[test]
    fn hamiltonian_of_each_unitary() {
        let disp = FundamentalUnitary::Displacement {
            alpha: ndarray::array![c(1.0, 0.0)],
        };
        let ham = hamiltonian_of(&disp, &tols()).unwrap();
        assert!((ham.h()[0] - c(0.0, 1.0)).norm() < 1e-15);
        assert!(crate::linalg::max_abs(ham.a()) < 1e-15);

        let rot = FundamentalUnitary::Rotation {
            phi: ndarray::array![[c(0.3, 0.0)]],
        };
        let ham = hamiltonian_of(&rot, &tols()).unwrap();
        assert!((ham.a()[[0, 0]] - c(-0.3, 0.0)).norm() < 1e-15);

        let sq = FundamentalUnitary::Squeeze {
            z: ndarray::array![[c(0.5, 0.0)]],
        };
        let ham = hamiltonian_of(&sq, &tols()).unwrap();
        assert!((ham.b()[[0, 0]] - c(0.0, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn rotation_near_period_boundary() {
        let phi = std::f64::consts::PI - 1e-9;
        let h = ndarray::array![c(1.0, 0.0)];
        let (_, psi) = rotation_closed_form(&ndarray::array![[c(phi, 0.0)]], &h, &tols()).unwrap();
        // P(π) = 2/π analytically; at π − 1e-9 we are within 1e-8 of it.
        let expected = 2.0 / std::f64::consts::PI;
        assert!((psi.p()[[0, 0]].re - expected).abs() < 1e-8);

        let out = rotation_closed_form(
            &ndarray::array![[c(std::f64::consts::PI, 0.0)]],
            &h,
            &tols(),
        );
        assert!(matches!(out, Err(Error::OutOfPeriod { .. })));
    }

    #[test]
    fn rotation_zero_angle_takes_singular_path() {
        let h = ndarray::array![c(1.0, 0.0)];
        let (pair, psi) =
            rotation_closed_form(&ndarray::array![[c(0.0, 0.0)]], &h, &tols()).unwrap();
        assert!(max_abs_diff(&pair.full_matrix(), &identity(2)) < 1e-14);
        // s → −ih in the φ → 0 limit.
        assert!((pair.s()[0] - c(0.0, -1.0)).norm() < 1e-12);
        assert!((psi.p()[[0, 0]] - c(0.0, -1.0)).norm() < 1e-12);
    }

    #[test]
    fn rotation_beam_splitter_blocks() {
        // φ = [[0, −iβ],[iβ, 0]] at β = π/4: E is the √2/2 rotation block
        // and P has the printed sinc pattern.
        let beta = std::f64::consts::FRAC_PI_4;
        let phi = ndarray::array![[c(0.0, 0.0), c(0.0, -beta)], [c(0.0, beta), c(0.0, 0.0)]];
        let h = CVec64::zeros(2);
        let (pair, psi) = rotation_closed_form(&phi, &h, &tols()).unwrap();
        let r = 2f64.sqrt() / 2.0;
        let e_expect = ndarray::array![[c(r, 0.0), c(r, 0.0)], [c(-r, 0.0), c(r, 0.0)]];
        assert!(max_abs_diff(pair.e(), &e_expect) < 1e-13);

        let sc = beta.sin() / beta;
        let cc = (beta.cos() - 1.0) / beta;
        let p_expect = ndarray::array![
            [c(0.0, -sc), c(0.0, cc)],
            [c(0.0, -cc), c(0.0, -sc)]
        ];
        assert!(max_abs_diff(psi.p(), &p_expect) < 1e-13);
        assert!(crate::linalg::max_abs(psi.q()) < 1e-15);

        // Agreement with the engine.
        let ham = hamiltonian_of(&FundamentalUnitary::Rotation { phi }, &tols()).unwrap();
        let out = forward_transform(&ham, &tols()).unwrap();
        assert!(max_abs_diff(&out.psi.full_matrix(), &psi.full_matrix()) < 1e-11);
    }

    #[test]
    fn squeeze_single_mode_values() {
        // r = 1, θ = 0, h = 1: s = −i sinh 1 + i(cosh 1 − 1) = −0.63212i.
        let z = ndarray::array![[c(1.0, 0.0)]];
        let h = ndarray::array![c(1.0, 0.0)];
        let (pair, psi) = squeeze_closed_form(&z, &h, &tols()).unwrap();
        assert!((pair.e()[[0, 0]].re - 1f64.cosh()).abs() < 1e-14);
        assert!((pair.f()[[0, 0]].re - 1f64.sinh()).abs() < 1e-14);
        let expected = c(0.0, -(1.0 - (-1f64).exp()));
        assert!((pair.s()[0] - expected).norm() < 1e-13);

        // Engine agreement.
        let ham = hamiltonian_of(&FundamentalUnitary::Squeeze { z }, &tols())
            .unwrap()
            .with_linear(h)
            .unwrap();
        let out = forward_transform(&ham, &tols()).unwrap();
        assert!(max_abs_diff(&out.psi.full_matrix(), &psi.full_matrix()) < 1e-11);
    }

    #[test]
    fn squeeze_theta_pi_amplifies() {
        let z = ndarray::array![[C64::from_polar(1.0, std::f64::consts::PI)]];
        let h = ndarray::array![c(1.0, 0.0)];
        let (pair, _) = squeeze_closed_form(&z, &h, &tols()).unwrap();
        assert!((pair.s()[0].norm() - (std::f64::consts::E - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn squeeze_zero_matches_displacement_limit() {
        let z = CMat64::zeros((1, 1));
        let h = ndarray::array![c(1.0, 0.0)];
        let (pair, _) = squeeze_closed_form(&z, &h, &tols()).unwrap();
        assert!((pair.s()[0] - c(0.0, -1.0)).norm() < 1e-13);
    }

    #[test]
    fn general_symplectic_single_mode_entries() {
        let (r, theta, phi) = (0.5, 0.7, 0.3);
        let z = ndarray::array![[C64::from_polar(r, theta)]];
        let phim = ndarray::array![[c(phi, 0.0)]];
        let pair = general_symplectic(&z, &phim, &tols()).unwrap();
        assert!((pair.e()[[0, 0]] - C64::from_polar(r.cosh(), phi)).norm() < 1e-13);
        assert!((pair.f()[[0, 0]] - C64::from_polar(r.sinh(), theta - phi)).norm() < 1e-13);

        // Equals the exponential product of the two Hamiltonians.
        let hs = hamiltonian_of(&FundamentalUnitary::Squeeze { z }, &tols()).unwrap();
        let hr = hamiltonian_of(&FundamentalUnitary::Rotation { phi: phim }, &tols()).unwrap();
        let ss = forward_transform(&hs, &tols()).unwrap().pair.full_matrix();
        let sr = forward_transform(&hr, &tols()).unwrap().pair.full_matrix();
        let prod = ss.dot(&sr);
        assert!(max_abs_diff(&pair.full_matrix(), &prod) < 1e-12);
    }

    #[test]
    fn sylvester_recovers_pure_rotation() {
        let phim = ndarray::array![[c(0.5, 0.0)]];
        let (pair, _) =
            rotation_closed_form(&phim, &CVec64::zeros(1), &tols()).unwrap();
        let (ham, _p, q) = single_mode_sylvester(&pair, &tols()).unwrap();
        assert!((ham.a()[[0, 0]] - c(-0.5, 0.0)).norm() < 1e-12);
        assert!(ham.b()[[0, 0]].norm() < 1e-12);
        assert!(q.norm() < 1e-12);
    }

    #[test]
    fn sylvester_pq_agree_with_direct_path() {
        let (r, phi, theta) = (0.5, 0.3, std::f64::consts::PI);
        let z = ndarray::array![[C64::from_polar(r, theta)]];
        let phim = ndarray::array![[c(phi, 0.0)]];
        let pair = general_symplectic(&z, &phim, &tols()).unwrap();
        let (_, p_s, q_s) = single_mode_sylvester(&pair, &tols()).unwrap();
        let (p_d, q_d, _) = single_mode_pq_direct(r, theta, phi, &tols()).unwrap();
        assert!((p_s - p_d).norm() < 1e-8);
        assert!((q_s - q_d).norm() < 1e-8);
    }

    #[test]
    fn sylvester_rejects_divergence_locus() {
        let r = 0.5f64;
        let phi = (-1.0 / r.cosh()).acos();
        let z = ndarray::array![[C64::from_polar(r, 0.2)]];
        let phim = ndarray::array![[c(phi, 0.0)]];
        let pair = general_symplectic(&z, &phim, &tols()).unwrap();
        let out = single_mode_pq_sylvester(pair.e()[[0, 0]], pair.f()[[0, 0]], &tols());
        assert!(matches!(
            out,
            Err(Error::DegenerateEigenvalues(_)) | Err(Error::NearDivergence { .. })
        ));
    }

    #[test]
    fn direct_path_limits() {
        // Pure squeeze: reduces to the squeeze closed form.
        let (p, q, _) = single_mode_pq_direct(1.0, 0.0, 0.0, &tols()).unwrap();
        assert!((p - c(0.0, -1f64.sinh())).norm() < 1e-12);
        assert!((q - c(0.0, 1f64.cosh() - 1.0)).norm() < 1e-12);

        // Pure rotation: reduces to −(e^{iφ} − 1)/φ.
        let phi = 0.5f64;
        let (p, q, _) = single_mode_pq_direct(0.0, 0.0, phi, &tols()).unwrap();
        let expected = -(im(phi).exp() - c(1.0, 0.0)) / c(phi, 0.0);
        assert!((p - expected).norm() < 1e-12);
        assert!(q.norm() < 1e-14);

        // cos φ cosh r = 1 exactly: T = 0 limit, finite coefficients.
        let r = 0.4f64;
        let phi = (1.0 / r.cosh()).acos();
        let (p, q, t) = single_mode_pq_direct(r, 0.3, phi, &tols()).unwrap();
        assert!(t.norm() < 1e-6);
        assert!(p.norm().is_finite() && q.norm().is_finite());
    }

    #[test]
    fn two_mode_reduces_to_factors() {
        // β = 0: pure two-mode squeezer.
        let out = two_mode_bs_squeeze(0.0, 0.3, 0.2, &tols()).unwrap();
        assert!((out.pair.e()[[0, 0]].re - 0.3f64.cosh()).abs() < 1e-13);
        assert!((out.pair.f()[[0, 1]] - C64::from_polar(0.3f64.sinh(), 0.2)).norm() < 1e-13);

        // r = 0: pure beam splitter.
        let out = two_mode_bs_squeeze(0.4, 0.0, 0.0, &tols()).unwrap();
        assert!((out.pair.e()[[0, 1]].re - 0.4f64.sin()).abs() < 1e-13);
        assert!(crate::linalg::max_abs(out.pair.f()) < 1e-13);
    }

    #[test]
    fn two_mode_matches_generic_pipeline() {
        let (beta, r, theta) = (0.4, 0.3, 0.2);
        let out = two_mode_bs_squeeze(beta, r, theta, &tols()).unwrap();

        let ham_generic = inverse_hamiltonian(&out.pair, &tols()).unwrap();
        assert!(
            max_abs_diff(&out.ham.full_matrix(), &ham_generic.full_matrix()) < 1e-9
        );
        let psi_series = psi_series_oracle(
            &out.ham.with_linear(CVec64::zeros(2)).unwrap(),
            1e-14,
        )
        .unwrap();
        assert!(max_abs_diff(&out.p, psi_series.p()) < 1e-9);
        assert!(max_abs_diff(&out.q, psi_series.q()) < 1e-9);
    }

    #[test]
    fn compose_follows_the_product_convention() {
        // Rotation then squeeze reproduces the general symplectic matrix.
        let (r, theta, phi) = (0.4, 0.9, 0.2);
        let z = ndarray::array![[C64::from_polar(r, theta)]];
        let phim = ndarray::array![[c(phi, 0.0)]];
        let cascade = vec![
            FundamentalUnitary::Rotation { phi: phim.clone() },
            FundamentalUnitary::Squeeze { z: z.clone() },
        ];
        let composed = compose(&cascade, &tols()).unwrap();
        let expected = general_symplectic(&z, &phim, &tols()).unwrap();
        assert!(max_abs_diff(&composed.full_matrix(), &expected.full_matrix()) < 1e-12);
    }

    #[test]
    fn compose_displacement_shift() {
        let alpha = c(0.7, -0.2);
        let cascade = vec![FundamentalUnitary::Displacement {
            alpha: ndarray::array![alpha],
        }];
        let pair = compose(&cascade, &tols()).unwrap();
        assert!((pair.s()[0] - alpha).norm() < 1e-15);
        assert!(max_abs_diff(&pair.full_matrix(), &identity(2)) < 1e-15);
    }

    #[test]
    fn compose_rejects_mixed_mode_counts() {
        let cascade = vec![
            FundamentalUnitary::Displacement {
                alpha: ndarray::array![c(1.0, 0.0)],
            },
            FundamentalUnitary::Displacement {
                alpha: ndarray::array![c(1.0, 0.0), c(0.0, 0.0)],
            },
        ];
        assert!(matches!(
            compose(&cascade, &tols()),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
