//! Shared helpers for the integration suites: seeded random structured
//! matrices and small independent oracles.

#![allow(dead_code)]

use ndarray::{Array1, Array2};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sympleq_core::linalg::{adjoint, eigh, identity, transpose};
use sympleq_core::{C64, CMat64, CVec64, Hamiltonian, Tolerances};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rand_c64(rng: &mut ChaCha8Rng, scale: f64) -> C64 {
    C64::new(
        rng.random_range(-scale..scale),
        rng.random_range(-scale..scale),
    )
}

pub fn rand_cmat(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> CMat64 {
    Array2::from_shape_fn((n, n), |_| rand_c64(rng, scale))
}

/// Random Hermitian matrix with entries of order `scale`.
pub fn rand_hermitian(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> CMat64 {
    let m = rand_cmat(rng, n, scale);
    (&m + &adjoint(&m)).mapv(|z| z * C64::new(0.5, 0.0))
}

/// Random complex symmetric matrix.
pub fn rand_symmetric(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> CMat64 {
    let m = rand_cmat(rng, n, scale);
    (&m + &transpose(&m)).mapv(|z| z * C64::new(0.5, 0.0))
}

/// Random structured Hamiltonian with entries of order `scale`.
pub fn rand_hamiltonian(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Hamiltonian<f64> {
    let a = rand_hermitian(rng, n, scale);
    let b = rand_symmetric(rng, n, scale);
    let h = Array1::from_shape_fn(n, |_| rand_c64(rng, scale));
    Hamiltonian::new(a, b, h, &Tolerances::default()).expect("random Hamiltonian is structured")
}

/// Deliberately rank-deficient Hamiltonian: project out the smallest
/// eigenvalues of a random one. The conjugate-block structure survives the
/// projection because the spectral subspaces respect it.
pub fn rand_singular_hamiltonian(
    rng: &mut ChaCha8Rng,
    n: usize,
    scale: f64,
    drop: usize,
) -> Hamiltonian<f64> {
    let ham = rand_hamiltonian(rng, n, scale);
    let full = ham.full_matrix();
    let eig = eigh(&full).expect("eigh");
    // Indices sorted by |λ| ascending.
    let mut order: Vec<usize> = (0..2 * n).collect();
    order.sort_by(|&i, &j| {
        eig.values[i]
            .abs()
            .partial_cmp(&eig.values[j].abs())
            .unwrap()
    });
    let mut reduced = full;
    for &idx in order.iter().take(drop) {
        let v = eig.vectors.column(idx).to_owned();
        let lambda = C64::new(eig.values[idx], 0.0);
        for r in 0..2 * n {
            for c in 0..2 * n {
                reduced[[r, c]] -= lambda * v[r] * v[c].conj();
            }
        }
    }
    // Symmetrize the rounding noise and rebuild through validation.
    let reduced = (&reduced + &adjoint(&reduced)).mapv(|z| z * C64::new(0.5, 0.0));
    let vfull = ham.full_vector();
    Hamiltonian::from_full(&reduced, &vfull, &Tolerances::default())
        .expect("projected Hamiltonian keeps its structure")
}

/// Plain Taylor summation of the matrix exponential: the independent
/// cross-check for the scaling-and-squaring kernel.
pub fn taylor_exp(a: &CMat64, terms: usize) -> CMat64 {
    let p = a.nrows();
    let mut sum = identity::<f64>(p);
    let mut term = identity::<f64>(p);
    for k in 1..=terms {
        term = term.dot(a).mapv(|z| z / C64::new(k as f64, 0.0));
        sum = sum + &term;
    }
    sum
}

/// |det M| through the Schur eigenvalues.
pub fn abs_det(m: &CMat64) -> f64 {
    let dec = sympleq_core::linalg::schur(m).expect("schur");
    (0..m.nrows()).map(|i| dec.t[[i, i]].norm()).product()
}

pub fn max_vec_diff(a: &CVec64, b: &CVec64) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (*x - *y).norm())
        .fold(0.0, f64::max)
}
