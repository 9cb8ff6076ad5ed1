//! Bridge between the complex and real symplectic pictures through the
//! unitary quadrature map `L = (1/√2)[[I, I],[−iI, iI]]`, which sends the
//! stacked operator vector `[a; a†]` to `[q; p]`.

use ndarray::{Array1, Array2};

use crate::linalg::{adjoint, max_abs, max_abs_diff};
use crate::model::{RealSymplecticPair, SymplecticPair};
use crate::tol::Tolerances;
use crate::{im, re, CMat, Error, RMat, RVec, RealScalar, Result};

/// The quadrature map for `n` modes.
#[derive(Debug, Clone)]
pub struct QuadratureMap<T> {
    n: usize,
    l: CMat<T>,
}

impl<T: RealScalar> QuadratureMap<T> {
    pub fn new(n: usize) -> Self {
        let inv_sqrt2 = T::one() / crate::conv::<T>(2.0).sqrt();
        let mut l = Array2::zeros((2 * n, 2 * n));
        for i in 0..n {
            l[[i, i]] = re(inv_sqrt2);
            l[[i, n + i]] = re(inv_sqrt2);
            l[[n + i, i]] = im(-inv_sqrt2);
            l[[n + i, n + i]] = im(inv_sqrt2);
        }
        Self { n, l }
    }

    pub fn modes(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &CMat<T> {
        &self.l
    }

    /// `‖LL† − I‖_max`: unitarity residual (exactly zero up to rounding).
    pub fn unitarity_residual(&self) -> T {
        let prod = self.l.dot(&adjoint(&self.l));
        max_abs_diff(&prod, &crate::linalg::identity(2 * self.n))
    }
}

fn strip_imag<T: RealScalar>(
    m: &CMat<T>,
    scale: T,
    tol: &Tolerances<T>,
    what: &str,
) -> Result<RMat<T>> {
    let max_imag = m.iter().fold(T::zero(), |acc, z| acc.max(z.im.abs()));
    if max_imag > tol.structure * scale.max(T::one()) {
        return Err(Error::StructureViolation(format!(
            "{what} has imaginary residue {:e}",
            max_imag.to_f64().unwrap_or(f64::NAN)
        )));
    }
    Ok(m.mapv(|z| z.re))
}

/// Convert a complex symplectic pair to quadrature coordinates:
/// `S₀ = L S L†`, `s₀ = L s = √2·[Re s; Im s]`.
pub fn to_real<T: RealScalar>(
    pair: &SymplecticPair<T>,
    tol: &Tolerances<T>,
) -> Result<RealSymplecticPair<T>> {
    let n = pair.modes();
    let map = QuadratureMap::new(n);
    let s_full = pair.full_matrix();
    let s0_complex = map.l.dot(&s_full).dot(&adjoint(&map.l));
    let s0 = strip_imag(&s0_complex, max_abs(&s_full), tol, "LSL†")?;

    let shift_complex = map.l.dot(&pair.full_vector());
    let mut shift: RVec<T> = Array1::zeros(2 * n);
    let shift_scale = crate::linalg::max_abs_vec(&pair.full_vector());
    for i in 0..2 * n {
        let z = shift_complex[i];
        if z.im.abs() > tol.structure * shift_scale.max(T::one()) {
            return Err(Error::StructureViolation(
                "Ls has nonzero imaginary residue".into(),
            ));
        }
        shift[i] = z.re;
    }
    RealSymplecticPair::new(s0, shift, tol)
}

/// Convert a real symplectic pair back: `S = L† S₀ L`, `s = L† s₀`.
pub fn to_complex<T: RealScalar>(
    real_pair: &RealSymplecticPair<T>,
    tol: &Tolerances<T>,
) -> Result<SymplecticPair<T>> {
    let n = real_pair.modes();
    let map = QuadratureMap::new(n);
    let s0_complex = real_pair.matrix().mapv(|x| re(x));
    let s_full = adjoint(&map.l).dot(&s0_complex).dot(&map.l);
    let shift_complex = real_pair.shift().mapv(|x| re(x));
    let s_vec = adjoint(&map.l).dot(&shift_complex);
    SymplecticPair::from_full(&s_full, &s_vec, tol)
}

/// The explicit block form of `L S L†`:
/// `[[Re(E+F), −Im(E−F)],[Im(E+F), Re(E−F)]]`.
pub fn real_matrix_block_form<T: RealScalar>(pair: &SymplecticPair<T>) -> RMat<T> {
    let n = pair.modes();
    let e = pair.e();
    let f = pair.f();
    let mut s0 = Array2::zeros((2 * n, 2 * n));
    for i in 0..n {
        for j in 0..n {
            let sum = e[[i, j]] + f[[i, j]];
            let diff = e[[i, j]] - f[[i, j]];
            s0[[i, j]] = sum.re;
            s0[[i, n + j]] = -diff.im;
            s0[[n + i, j]] = sum.im;
            s0[[n + i, n + j]] = diff.re;
        }
    }
    s0
}
