//! Conversions between quadratic bosonic Hamiltonians `(H, h)` and complex
//! symplectic transformations `(S, s)`.
//!
//! An `n`-mode Gaussian unitary `U = e^{-iH}` acts on the stacked operator
//! vector `ξ = [a; a†]` as the affine map `ξ → Sξ + s` with
//! `S = e^{-iΩH}` and `s = Ψh`, where `Ψ` sums the series
//! `Σ_{m≥1} (1/m!) (-iΩH)^{m-1} (-iΩ)`. This crate implements that map in
//! both directions (the inverse goes through the principal matrix
//! logarithm), the closed forms for displacement, rotation and squeezing,
//! the bridge to real symplectic matrices in quadrature coordinates, and a
//! truncated Fock-space oracle that checks the operator identity
//! independently of the matrix algebra.
//!
//! All numerical kernels are generic over the underlying real scalar via
//! [`RealScalar`]; concrete `f64` aliases live at the crate root.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

pub mod error;
pub mod fock;
pub mod linalg;
pub mod model;
pub mod phase_space;
pub mod sweep;
pub mod tol;
pub mod transform;
pub mod unitaries;

pub use error::{Error, Result};
pub use model::{omega, omega0, Hamiltonian, PsiMatrix, RealSymplecticPair, SymplecticPair};
pub use tol::Tolerances;

/// Real scalar type underlying all complex arithmetic in this crate.
///
/// Implemented for `f32` and `f64`; everything the kernels need comes from
/// `num-traits`.
pub trait RealScalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + LowerExp + Send + Sync + 'static
{
}

impl<T> RealScalar for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + Sum
        + Debug
        + Display
        + LowerExp
        + Send
        + Sync
        + 'static
{
}

/// Complex number over the generic real scalar.
pub type Cx<T> = num_complex::Complex<T>;
/// Dense complex matrix.
pub type CMat<T> = ndarray::Array2<Cx<T>>;
/// Dense complex vector.
pub type CVec<T> = ndarray::Array1<Cx<T>>;
/// Dense real matrix.
pub type RMat<T> = ndarray::Array2<T>;
/// Dense real vector.
pub type RVec<T> = ndarray::Array1<T>;

pub type C64 = Cx<f64>;
pub type C32 = Cx<f32>;
pub type CMat64 = CMat<f64>;
pub type CVec64 = CVec<f64>;

/// Shorthand for building a complex scalar from a real part.
#[inline]
pub fn re<T: RealScalar>(x: T) -> Cx<T> {
    Cx::new(x, T::zero())
}

/// Shorthand for building a complex scalar from an imaginary part.
#[inline]
pub fn im<T: RealScalar>(x: T) -> Cx<T> {
    Cx::new(T::zero(), x)
}

/// Convert an `f64` constant into the generic real scalar.
///
/// Panics only if `T` cannot represent any `f64`, which does not happen for
/// the supported float types.
#[inline]
pub fn conv<T: RealScalar>(x: f64) -> T {
    T::from_f64(x).expect("f64 constant must convert into the scalar type")
}
