//! Truncated Fock-space oracle.
//!
//! Represents the mode operators as finite matrices, assembles the actual
//! Hamiltonian operator from `(H, h)`, and checks the Heisenberg-picture
//! identity `e^{iH} a_k e^{-iH} = Σ_j E_kj a_j + Σ_j F_kj a_j† + s_k`
//! numerically — ground truth that is independent of every matrix-function
//! kernel in this crate.

use ndarray::linalg::kron;
use ndarray::Array2;

use crate::linalg::{adjoint, identity, mat_exp};
use crate::model::{Hamiltonian, SymplecticPair};
use crate::{re, CMat, Cx, Error, RealScalar, Result};

/// Default cap on the total Fock dimension `dⁿ`.
pub const DEFAULT_DIM_CAP: usize = 4096;

/// Finite-dimensional representation of `n` bosonic modes truncated at `d`
/// levels per mode.
#[derive(Debug, Clone)]
pub struct FockRep<T> {
    n: usize,
    d: usize,
    ops: Vec<CMat<T>>,
    levels: Vec<usize>,
}

fn annihilator<T: RealScalar>(d: usize) -> CMat<T> {
    let mut a = Array2::zeros((d, d));
    for k in 1..d {
        a[[k - 1, k]] = re(crate::conv::<T>(k as f64).sqrt());
    }
    a
}

impl<T: RealScalar> FockRep<T> {
    /// Build the tensor-product annihilators for `n` modes at per-mode
    /// truncation `d`. Fails with `DimensionOverflow` when `dⁿ > cap`.
    pub fn new(n: usize, d: usize, cap: usize) -> Result<Self> {
        assert!(n >= 1, "at least one mode");
        assert!(d >= 2, "truncation must keep at least two levels");
        let mut dim: usize = 1;
        for _ in 0..n {
            dim = dim.saturating_mul(d);
            if dim > cap {
                return Err(Error::DimensionOverflow { dim, cap });
            }
        }
        let single = annihilator::<T>(d);
        let eye = identity::<T>(d);
        let mut ops = Vec::with_capacity(n);
        for k in 0..n {
            let mut op = if k == 0 { single.clone() } else { eye.clone() };
            for m in 1..n {
                let factor = if m == k { &single } else { &eye };
                op = kron(&op, factor);
            }
            ops.push(op);
        }
        // Total excitation per basis index (row-major kron ordering).
        let mut levels = vec![0usize; dim];
        for (idx, level) in levels.iter_mut().enumerate() {
            let mut t = idx;
            let mut total = 0;
            for _ in 0..n {
                total += t % d;
                t /= d;
            }
            *level = total;
        }
        Ok(Self { n, d, ops, levels })
    }

    /// Default truncation for a given mode count: `d = 40` for one mode,
    /// `d = 14` for two, shrinking with the cap beyond that.
    pub fn with_default_dim(n: usize, cap: usize) -> Result<Self> {
        let d = match n {
            1 => 40,
            2 => 14,
            _ => {
                let mut d = 2;
                while (d + 1usize).pow(n as u32) <= cap {
                    d += 1;
                }
                d
            }
        };
        Self::new(n, d, cap)
    }

    pub fn modes(&self) -> usize {
        self.n
    }
    pub fn levels_per_mode(&self) -> usize {
        self.d
    }
    pub fn dim(&self) -> usize {
        self.levels.len()
    }
    /// Annihilation operator of mode `k`.
    pub fn annihilation(&self, k: usize) -> &CMat<T> {
        &self.ops[k]
    }
    /// Total excitation of a basis index.
    pub fn excitation(&self, idx: usize) -> usize {
        self.levels[idx]
    }

    /// Largest commutator residual `[a_j, a_k†] − δ_jk I` over the
    /// subspace with total excitation below `d − 1` (the truncation edge
    /// corrupts the last level by construction).
    pub fn commutator_residual(&self) -> T {
        let mut worst = T::zero();
        for j in 0..self.n {
            for k in 0..self.n {
                let comm = self.ops[j].dot(&adjoint(&self.ops[k]))
                    - adjoint(&self.ops[k]).dot(&self.ops[j]);
                for (ri, row_level) in self.levels.iter().enumerate() {
                    if *row_level + 1 >= self.d {
                        continue;
                    }
                    for (ci, col_level) in self.levels.iter().enumerate() {
                        if *col_level + 1 >= self.d {
                            continue;
                        }
                        let expect = if j == k && ri == ci { T::one() } else { T::zero() };
                        let err = (comm[[ri, ci]] - re(expect)).norm();
                        worst = worst.max(err);
                    }
                }
            }
        }
        worst
    }
}

/// Assemble the Hamiltonian operator
/// `½Σ[A_rs a_r†a_s + Ā_rs a_r a_s†] + ½Σ[B_rs a_r†a_s† + B̄_rs a_r a_s]
///  + Σ(h_r a_r† + h̄_r a_r)` on the truncated space.
pub fn build_hamiltonian_operator<T: RealScalar>(
    ham: &Hamiltonian<T>,
    rep: &FockRep<T>,
) -> Result<CMat<T>> {
    if ham.modes() != rep.modes() {
        return Err(Error::DimensionMismatch {
            expected: rep.modes(),
            got: ham.modes(),
        });
    }
    let n = rep.modes();
    let dim = rep.dim();
    let half = re(crate::conv::<T>(0.5));
    let mut op: CMat<T> = Array2::zeros((dim, dim));
    for r in 0..n {
        let ar_dag = adjoint(&rep.ops[r]);
        for s in 0..n {
            let a_coeff = ham.a()[[r, s]];
            if a_coeff.norm() > T::zero() {
                let term = ar_dag.dot(&rep.ops[s]).mapv(|z| z * a_coeff * half);
                let term_c = rep.ops[r]
                    .dot(&adjoint(&rep.ops[s]))
                    .mapv(|z| z * a_coeff.conj() * half);
                op = op + term + term_c;
            }
            let b_coeff = ham.b()[[r, s]];
            if b_coeff.norm() > T::zero() {
                let term = ar_dag
                    .dot(&adjoint(&rep.ops[s]))
                    .mapv(|z| z * b_coeff * half);
                let term_c = rep.ops[r].dot(&rep.ops[s]).mapv(|z| z * b_coeff.conj() * half);
                op = op + term + term_c;
            }
        }
        let h_coeff = ham.h()[r];
        if h_coeff.norm() > T::zero() {
            op = op + ar_dag.mapv(|z| z * h_coeff) + rep.ops[r].mapv(|z| z * h_coeff.conj());
        }
    }
    Ok(op)
}

/// Outcome of the Heisenberg identity check.
#[derive(Debug, Clone)]
pub struct HeisenbergReport<T> {
    /// Largest elementwise residual over the compared subspace.
    pub residual: T,
    /// Per-mode residuals.
    pub per_mode: Vec<T>,
    /// Excitation cut that defined the compared subspace.
    pub safe_cut: usize,
}

/// Compare `e^{iH} a_k e^{-iH}` against `Σ E_kj a_j + Σ F_kj a_j† + s_k`
/// elementwise on the subspace with total excitation ≤ `safe_cut`
/// (default: half the per-mode truncation).
pub fn heisenberg_check<T: RealScalar>(
    ham: &Hamiltonian<T>,
    pair: &SymplecticPair<T>,
    rep: &FockRep<T>,
    safe_cut: Option<usize>,
) -> Result<HeisenbergReport<T>> {
    if ham.modes() != rep.modes() || pair.modes() != rep.modes() {
        return Err(Error::DimensionMismatch {
            expected: rep.modes(),
            got: ham.modes().max(pair.modes()),
        });
    }
    let cut = safe_cut.unwrap_or(rep.levels_per_mode() / 2);
    let n = rep.modes();
    let dim = rep.dim();

    let h_op = build_hamiltonian_operator(ham, rep)?;
    let i_h = h_op.mapv(|z| z * Cx::new(T::zero(), T::one()));
    let w = mat_exp(&i_h)?;
    // H is Hermitian, so e^{-iH} = (e^{iH})†.
    let w_dag = adjoint(&w);

    let keep: Vec<usize> = (0..dim).filter(|&i| rep.excitation(i) <= cut).collect();
    let mut per_mode = Vec::with_capacity(n);
    let mut worst = T::zero();
    for k in 0..n {
        let lhs = w.dot(&rep.ops[k]).dot(&w_dag);
        let mut rhs: CMat<T> = Array2::zeros((dim, dim));
        for j in 0..n {
            let e_kj = pair.e()[[k, j]];
            if e_kj.norm() > T::zero() {
                rhs = rhs + rep.ops[j].mapv(|z| z * e_kj);
            }
            let f_kj = pair.f()[[k, j]];
            if f_kj.norm() > T::zero() {
                rhs = rhs + adjoint(&rep.ops[j]).mapv(|z| z * f_kj);
            }
        }
        let s_k = pair.s()[k];
        for i in 0..dim {
            rhs[[i, i]] = rhs[[i, i]] + s_k;
        }
        let mut mode_worst = T::zero();
        for &ri in &keep {
            for &ci in &keep {
                mode_worst = mode_worst.max((lhs[[ri, ci]] - rhs[[ri, ci]]).norm());
            }
        }
        per_mode.push(mode_worst);
        worst = worst.max(mode_worst);
    }
    Ok(HeisenbergReport {
        residual: worst,
        per_mode,
        safe_cut: cut,
    })
}

/// Like [`heisenberg_check`], but classify failures: when the residual
/// exceeds `tol_residual` yet shrinks after growing the truncation by ten
/// levels, report `TruncationDominates` instead of a silent failure.
pub fn heisenberg_check_with_tol<T: RealScalar>(
    ham: &Hamiltonian<T>,
    pair: &SymplecticPair<T>,
    rep: &FockRep<T>,
    safe_cut: Option<usize>,
    tol_residual: T,
    cap: usize,
) -> Result<HeisenbergReport<T>> {
    let report = heisenberg_check(ham, pair, rep, safe_cut)?;
    if report.residual <= tol_residual {
        return Ok(report);
    }
    let refined_rep = FockRep::new(rep.modes(), rep.levels_per_mode() + 10, cap)?;
    let refined = heisenberg_check(
        ham,
        pair,
        &refined_rep,
        Some(safe_cut.unwrap_or(rep.levels_per_mode() / 2)),
    )?;
    if refined.residual < report.residual {
        return Err(Error::TruncationDominates {
            residual: report.residual.to_f64().unwrap_or(f64::NAN),
            refined: refined.residual.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use crate::transform::forward_transform;
    use crate::unitaries::{general_symplectic, hamiltonian_of, FundamentalUnitary};
    use crate::{C64, CVec64, Tolerances};

    fn tols() -> Tolerances<f64> {
        Tolerances::default()
    }

    fn c(re: f64, imv: f64) -> C64 {
        C64::new(re, imv)
    }

    #[test]
    fn commutators_hold_on_low_subspace() {
        let rep = FockRep::<f64>::new(2, 8, DEFAULT_DIM_CAP).unwrap();
        assert!(rep.commutator_residual() < 1e-12);
    }

    #[test]
    fn dimension_cap_enforced() {
        assert!(matches!(
            FockRep::<f64>::new(2, 80, DEFAULT_DIM_CAP),
            Err(Error::DimensionOverflow { .. })
        ));
    }

    #[test]
    fn displacement_operator_is_linear_form() {
        // H = 0, h = [i]: operator = i a† − i a.
        let rep = FockRep::<f64>::new(1, 6, DEFAULT_DIM_CAP).unwrap();
        let ham = Hamiltonian::new(
            ndarray::array![[c(0.0, 0.0)]],
            ndarray::array![[c(0.0, 0.0)]],
            ndarray::array![c(0.0, 1.0)],
            &tols(),
        )
        .unwrap();
        let op = build_hamiltonian_operator(&ham, &rep).unwrap();
        let expect = adjoint(rep.annihilation(0)).mapv(|z| z * c(0.0, 1.0))
            + rep.annihilation(0).mapv(|z| z * c(0.0, -1.0));
        assert!(max_abs_diff(&op, &expect) < 1e-15);
    }

    #[test]
    fn rotation_operator_is_number_form() {
        // A = [−φ]: operator = −φ(a†a + ½) — diagonal in Fock basis.
        let phi = 0.7f64;
        let rep = FockRep::<f64>::new(1, 6, DEFAULT_DIM_CAP).unwrap();
        let ham = Hamiltonian::new(
            ndarray::array![[c(-phi, 0.0)]],
            ndarray::array![[c(0.0, 0.0)]],
            CVec64::zeros(1),
            &tols(),
        )
        .unwrap();
        let op = build_hamiltonian_operator(&ham, &rep).unwrap();
        for k in 0..5 {
            let expect = -phi * (k as f64 + 0.5);
            assert!((op[[k, k]].re - expect).abs() < 1e-13);
        }
        // Hermitian.
        assert!(max_abs_diff(&op, &adjoint(&op)) < 1e-14);
    }

    #[test]
    fn displacement_identity_in_heisenberg_picture() {
        let rep = FockRep::<f64>::new(1, 40, DEFAULT_DIM_CAP).unwrap();
        let ham = Hamiltonian::new(
            ndarray::array![[c(0.0, 0.0)]],
            ndarray::array![[c(0.0, 0.0)]],
            ndarray::array![c(0.0, 1.0)], // α = 1
            &tols(),
        )
        .unwrap();
        let out = forward_transform(&ham, &tols()).unwrap();
        // Interior cut: truncation is provably subdominant there.
        let report = heisenberg_check(&ham, &out.pair, &rep, Some(18)).unwrap();
        assert!(report.residual < 1e-8, "residual {:e}", report.residual);
    }

    #[test]
    fn squeeze_with_linear_term_matches_on_interior() {
        let rep = FockRep::<f64>::new(1, 40, DEFAULT_DIM_CAP).unwrap();
        let ham = hamiltonian_of(
            &FundamentalUnitary::Squeeze {
                z: ndarray::array![[c(0.4, 0.0)]],
            },
            &tols(),
        )
        .unwrap()
        .with_linear(ndarray::array![c(0.0, 0.3)])
        .unwrap();
        let out = forward_transform(&ham, &tols()).unwrap();
        let report = heisenberg_check(&ham, &out.pair, &rep, Some(6)).unwrap();
        assert!(report.residual < 1e-6, "residual {:e}", report.residual);
    }

    #[test]
    fn truncation_dominates_is_detected() {
        // At the half-truncation cut the squeeze residual is truncation
        // noise: it must be classified as such, not as a logic error.
        let rep = FockRep::<f64>::new(1, 30, DEFAULT_DIM_CAP).unwrap();
        let ham = hamiltonian_of(
            &FundamentalUnitary::Squeeze {
                z: ndarray::array![[c(0.4, 0.0)]],
            },
            &tols(),
        )
        .unwrap();
        let out = forward_transform(&ham, &tols()).unwrap();
        let verdict =
            heisenberg_check_with_tol(&ham, &out.pair, &rep, Some(15), 1e-6, DEFAULT_DIM_CAP);
        assert!(matches!(verdict, Err(Error::TruncationDominates { .. })));
    }

    #[test]
    fn composite_ordering_matches_squeeze_after_rotation() {
        // The closed-form S for squeeze∘rotation corresponds to the
        // operator product Z·R (rotation applied first): the Fock oracle
        // distinguishes the two orderings decisively.
        let (r, phi, theta) = (0.3, 0.2, 0.5);
        let rep = FockRep::<f64>::new(1, 40, DEFAULT_DIM_CAP).unwrap();
        let tol = tols();

        let z = ndarray::array![[C64::from_polar(r, theta)]];
        let phim = ndarray::array![[c(phi, 0.0)]];
        let ham_sq = hamiltonian_of(&FundamentalUnitary::Squeeze { z: z.clone() }, &tol).unwrap();
        let ham_rot =
            hamiltonian_of(&FundamentalUnitary::Rotation { phi: phim.clone() }, &tol).unwrap();

        let u_z = mat_exp(
            &build_hamiltonian_operator(&ham_sq, &rep)
                .unwrap()
                .mapv(|w| w * c(0.0, -1.0)),
        )
        .unwrap();
        let u_r = mat_exp(
            &build_hamiltonian_operator(&ham_rot, &rep)
                .unwrap()
                .mapv(|w| w * c(0.0, -1.0)),
        )
        .unwrap();

        let pair = general_symplectic(&z, &phim, &tol).unwrap();
        let a = rep.annihilation(0);
        let rhs = a.mapv(|w| w * pair.e()[[0, 0]]) + adjoint(a).mapv(|w| w * pair.f()[[0, 0]]);

        let keep: Vec<usize> = (0..rep.dim()).filter(|&i| rep.excitation(i) <= 8).collect();
        let resid = |u: &CMat<f64>| -> f64 {
            let lhs = adjoint(u).dot(a).dot(u);
            keep.iter()
                .flat_map(|&ri| keep.iter().map(move |&ci| (ri, ci)))
                .map(|(ri, ci)| (lhs[[ri, ci]] - rhs[[ri, ci]]).norm())
                .fold(0.0, f64::max)
        };

        let zr = resid(&u_z.dot(&u_r));
        let rz = resid(&u_r.dot(&u_z));
        assert!(zr < 1e-8, "Z·R residual {:e}", zr);
        assert!(rz > 1e-2, "R·Z residual unexpectedly small: {:e}", rz);
    }

    #[test]
    fn constant_term_cancels_in_similarity() {
        // Adding c·I to the Hamiltonian operator cannot change the
        // Heisenberg transform; the −½Tr(A) bookkeeping is irrelevant.
        let rep = FockRep::<f64>::new(1, 20, DEFAULT_DIM_CAP).unwrap();
        let ham = Hamiltonian::new(
            ndarray::array![[c(-0.7, 0.0)]],
            ndarray::array![[c(0.0, 0.0)]],
            CVec64::zeros(1),
            &tols(),
        )
        .unwrap();
        let op = build_hamiltonian_operator(&ham, &rep).unwrap();
        let shifted = &op + &identity::<f64>(rep.dim()).mapv(|w| w * c(0.35, 0.0));
        let a = rep.annihilation(0);
        let w1 = mat_exp(&op.mapv(|w| w * c(0.0, 1.0))).unwrap();
        let w2 = mat_exp(&shifted.mapv(|w| w * c(0.0, 1.0))).unwrap();
        let t1 = w1.dot(a).dot(&adjoint(&w1));
        let t2 = w2.dot(a).dot(&adjoint(&w2));
        assert!(max_abs_diff(&t1, &t2) < 1e-12);
    }
}
