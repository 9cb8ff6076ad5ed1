//! Parameter sweeps behind the displacement-amplification analysis:
//! `|s|` versus squeeze phase/magnitude, the rotation-only attenuation
//! curve, the rotation+squeeze divergence scan, and the amplification
//! boundary `|s(r, θ)| = 1`.

use rayon::prelude::*;

use crate::tol::Tolerances;
use crate::unitaries::single_mode_pq_direct;
use crate::{im, re, Cx, Error, RealScalar, Result};

/// One of the built-in studies.
#[derive(Debug, Clone, PartialEq)]
pub enum Study<T> {
    /// `|s|` vs θ at fixed squeeze magnitude.
    SqueezeTheta { r: T },
    /// `|s|` vs r at fixed squeeze phase.
    SqueezeR { theta: T, r_max: T },
    /// `|s|` vs rotation angle at fixed squeeze.
    RotSqueezePhi { r: T, theta: T },
    /// Locus `|s(r, θ)| = 1` separating attenuation from amplification.
    AmpBoundary { r_max: T },
    /// Rotation-only attenuation curve.
    RotOnly,
}

impl<T: RealScalar> Study<T> {
    pub fn name(&self) -> &'static str {
        match self {
            Study::SqueezeTheta { .. } => "squeeze-theta",
            Study::SqueezeR { .. } => "squeeze-r",
            Study::RotSqueezePhi { .. } => "rot-squeeze-phi",
            Study::AmpBoundary { .. } => "amp-boundary",
            Study::RotOnly => "rot-only",
        }
    }
}

/// One row of a sweep: the axis value plus data columns, in the order the
/// parent result names them. Divergence-flagged rows carry no data values.
#[derive(Debug, Clone)]
pub struct SweepRow<T> {
    pub values: Vec<Option<T>>,
    pub divergent: bool,
}

/// Grid output of a study.
#[derive(Debug, Clone)]
pub struct SweepResult<T> {
    pub study: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<SweepRow<T>>,
    /// Refined divergence locations on the axis (empty for most studies).
    pub divergences: Vec<T>,
}

/// Displacement of squeezing + displacement in the single mode:
/// `s = −i sinh(r)/r · h + i e^{iθ}(cosh r − 1)/r · h̄`, with the `r → 0`
/// limit `−ih`.
pub fn squeeze_shift<T: RealScalar>(r: T, theta: T, h: Cx<T>) -> Cx<T> {
    if r == T::zero() {
        return h * im(-T::one());
    }
    let sinhc = r.sinh() / r;
    // (cosh r − 1)/r = 2 sinh²(r/2)/r, cancellation-free.
    let half = crate::conv::<T>(0.5);
    let sh = (r * half).sinh();
    let coshm1 = crate::conv::<T>(2.0) * sh * sh / r;
    h * im(-sinhc) + h.conj() * im(coshm1) * im(theta).exp() * re(T::one())
}

/// `|s(r, θ)|` for unit linear term:
/// `2 sinh(r/2)·√(cosh r − sinh r cos θ)/r`, limit 1 at `r = 0`.
pub fn squeeze_shift_magnitude<T: RealScalar>(r: T, theta: T) -> T {
    if r == T::zero() {
        return T::one();
    }
    let half = crate::conv::<T>(0.5);
    let two = crate::conv::<T>(2.0);
    two * (r * half).sinh() * (r.cosh() - r.sinh() * theta.cos()).sqrt() / r
}

/// Rotation-only displacement `s = −(e^{iφ} − 1)/φ · h` in its stable
/// `−i e^{iφ/2} sin(φ/2)/(φ/2)` form.
pub fn rotation_shift<T: RealScalar>(phi: T, h: Cx<T>) -> Cx<T> {
    let half = crate::conv::<T>(0.5);
    let xh = phi * half;
    let sinc = if xh == T::zero() {
        T::one()
    } else {
        xh.sin() / xh
    };
    h * im(-T::one()) * im(xh).exp() * re(sinc)
}

/// Solve `|s(r, θ)| = 1` for `θ ∈ (0, π)` by bisection to 1e-10.
///
/// The magnitude is monotone in θ on `[0, π]` with `|s(r, 0)| < 1 <
/// |s(r, π)|` for every `r > 0`, so exactly one boundary angle exists.
pub fn amp_boundary_theta<T: RealScalar>(r: T) -> Option<T> {
    if r <= T::zero() {
        return None;
    }
    let target = T::one();
    let mut lo = T::zero();
    let mut hi = T::PI();
    if squeeze_shift_magnitude(r, lo) >= target || squeeze_shift_magnitude(r, hi) <= target {
        return None;
    }
    let tol = crate::conv::<T>(1e-10);
    while hi - lo > tol {
        let mid = (lo + hi) * crate::conv::<T>(0.5);
        if squeeze_shift_magnitude(r, mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some((lo + hi) * crate::conv::<T>(0.5))
}

/// Locations of the `|s|` divergences of the rotation+squeeze cascade in
/// `[0, 2π)`: the roots of `1 + cos φ·cosh r`, found by bisection to
/// 1e-10. Empty for `r = 0`.
pub fn divergence_phis<T: RealScalar>(r: T) -> Vec<T> {
    if r <= T::zero() {
        return Vec::new();
    }
    let cosh_r = r.cosh();
    let g = |phi: T| T::one() + phi.cos() * cosh_r;
    let tol = crate::conv::<T>(1e-10);
    let bisect = |mut lo: T, mut hi: T, increasing: bool| -> T {
        while hi - lo > tol {
            let mid = (lo + hi) * crate::conv::<T>(0.5);
            let positive = g(mid) > T::zero();
            if positive != increasing {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (lo + hi) * crate::conv::<T>(0.5)
    };
    let pi = T::PI();
    let two_pi = pi + pi;
    // g decreases through zero on (0, π) and increases back on (π, 2π).
    let first = bisect(T::zero(), pi, false);
    let second = bisect(pi, two_pi, true);
    vec![first, second]
}

fn shift_columns() -> Vec<&'static str> {
    vec!["s_re", "s_im", "abs_s"]
}

fn shift_row<T: RealScalar>(x: T, s: Cx<T>) -> SweepRow<T> {
    SweepRow {
        values: vec![Some(x), Some(s.re), Some(s.im), Some(s.norm())],
        divergent: false,
    }
}

/// Run a study on `points` grid points with linear term `h`.
///
/// Rows are produced in axis order; grid evaluation is embarrassingly
/// parallel and runs on the rayon pool.
pub fn run_study<T: RealScalar>(
    study: &Study<T>,
    points: usize,
    h: Cx<T>,
    tol: &Tolerances<T>,
) -> Result<SweepResult<T>> {
    if points < 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: points,
        });
    }
    let pi = T::PI();
    let two_pi = pi + pi;

    match study {
        Study::SqueezeTheta { r } => {
            let r = *r;
            let step = two_pi / crate::conv::<T>((points - 1) as f64);
            let rows: Vec<SweepRow<T>> = (0..points)
                .into_par_iter()
                .map(|j| {
                    let theta = step * crate::conv::<T>(j as f64);
                    shift_row(theta, squeeze_shift(r, theta, h))
                })
                .collect();
            let mut columns = vec!["theta"];
            columns.extend(shift_columns());
            Ok(SweepResult {
                study: study.name(),
                columns,
                rows,
                divergences: Vec::new(),
            })
        }
        Study::SqueezeR { theta, r_max } => {
            let theta = *theta;
            let r_max = *r_max;
            let rows: Vec<SweepRow<T>> = (0..points)
                .into_par_iter()
                .map(|j| {
                    let frac = crate::conv::<T>((j + 1) as f64) / crate::conv::<T>(points as f64);
                    let r = r_max * frac;
                    shift_row(r, squeeze_shift(r, theta, h))
                })
                .collect();
            let mut columns = vec!["r"];
            columns.extend(shift_columns());
            Ok(SweepResult {
                study: study.name(),
                columns,
                rows,
                divergences: Vec::new(),
            })
        }
        Study::RotSqueezePhi { r, theta } => {
            let r = *r;
            let theta = *theta;
            let step = two_pi / crate::conv::<T>(points as f64);
            let tol = *tol;
            let mut rows: Vec<SweepRow<T>> = (0..points)
                .into_par_iter()
                .map(|j| {
                    let phi = step * crate::conv::<T>(j as f64);
                    match single_mode_pq_direct(r, theta, phi, &tol) {
                        Ok((p, q, _)) => {
                            let s = p * h + q * h.conj();
                            shift_row(phi, s)
                        }
                        Err(_) => SweepRow {
                            values: vec![Some(phi), None, None, None],
                            divergent: true,
                        },
                    }
                })
                .collect();
            // Flag the grid points bracketing each refined divergence.
            let divergences = divergence_phis(r);
            for root in &divergences {
                let idx = (*root / step).to_f64().unwrap_or(0.0).floor() as usize;
                for k in [idx, idx + 1] {
                    if let Some(row) = rows.get_mut(k % points) {
                        row.divergent = true;
                        for v in row.values.iter_mut().skip(1) {
                            *v = None;
                        }
                    }
                }
            }
            let mut columns = vec!["phi"];
            columns.extend(shift_columns());
            Ok(SweepResult {
                study: study.name(),
                columns,
                rows,
                divergences,
            })
        }
        Study::AmpBoundary { r_max } => {
            let r_max = *r_max;
            let rows: Vec<SweepRow<T>> = (0..points)
                .into_par_iter()
                .map(|j| {
                    let frac = crate::conv::<T>((j + 1) as f64) / crate::conv::<T>(points as f64);
                    let r = r_max * frac;
                    match amp_boundary_theta(r) {
                        Some(theta) => SweepRow {
                            values: vec![Some(r), Some(theta)],
                            divergent: false,
                        },
                        None => SweepRow {
                            values: vec![Some(r), None],
                            divergent: true,
                        },
                    }
                })
                .collect();
            Ok(SweepResult {
                study: study.name(),
                columns: vec!["r", "theta_boundary"],
                rows,
                divergences: Vec::new(),
            })
        }
        Study::RotOnly => {
            let margin = crate::conv::<T>(1e-6);
            let lo = -pi + margin;
            let hi = pi - margin;
            let step = (hi - lo) / crate::conv::<T>((points - 1) as f64);
            let rows: Vec<SweepRow<T>> = (0..points)
                .into_par_iter()
                .map(|j| {
                    let phi = lo + step * crate::conv::<T>(j as f64);
                    shift_row(phi, rotation_shift(phi, h))
                })
                .collect();
            let mut columns = vec!["phi"];
            columns.extend(shift_columns());
            Ok(SweepResult {
                study: study.name(),
                columns,
                rows,
                divergences: Vec::new(),
            })
        }
    }
}
