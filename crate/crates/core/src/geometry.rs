//! Maps physical beam, aperture, and jitter geometry to the misalignment
//! statistics (v, A₀, w_zeq, ξ) and inverts that map for optimization.
//!
//! All lengths are in meters; there is no unit-conversion layer.

use crate::error::{to_f64, Error, Result};
use crate::real::{real, Real};
use crate::solve::bracket_root;
use crate::specfun::erf;

/// Physical link inputs.
///
/// `distance_d` and `wavelength_lambda` are carried for the link budget and
/// responsivity only; the pointing statistics depend on the three radii.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamGeometry<T> {
    /// Receiver aperture radius (m).
    pub aperture_radius_r: T,
    /// Beam waist on the receiver plane (m).
    pub beam_waist_wz: T,
    /// Pointing-jitter standard deviation at the receiver (m).
    pub jitter_sigma_s: T,
    /// Transmitter-receiver distance (m).
    pub distance_d: T,
    /// Optical wavelength (m).
    pub wavelength_lambda: T,
}

impl<T: Real> BeamGeometry<T> {
    pub fn new(
        aperture_radius_r: T,
        beam_waist_wz: T,
        jitter_sigma_s: T,
        distance_d: T,
        wavelength_lambda: T,
    ) -> Result<Self> {
        for (param, value) in [
            ("aperture_radius_r", aperture_radius_r),
            ("beam_waist_wz", beam_waist_wz),
            ("jitter_sigma_s", jitter_sigma_s),
            ("distance_d", distance_d),
            ("wavelength_lambda", wavelength_lambda),
        ] {
            if !value.is_finite() {
                return Err(Error::NonFinite {
                    func: "BeamGeometry::new",
                    param,
                    value: to_f64(value),
                });
            }
            if value <= T::zero() {
                return Err(Error::Domain {
                    func: "BeamGeometry::new",
                    param,
                    value: to_f64(value),
                    constraint: "strictly positive",
                });
            }
        }
        Ok(Self {
            aperture_radius_r,
            beam_waist_wz,
            jitter_sigma_s,
            distance_d,
            wavelength_lambda,
        })
    }
}

/// Derived misalignment statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointingParams<T> {
    /// Aperture-to-beam ratio v = √π r / (√2 w_z).
    pub v: T,
    /// Fraction of power collected at zero displacement, A₀ = erf(v)².
    pub a0: T,
    /// Equivalent beam radius (m), w_zeq² = w_z² √π erf(v) / (2 v e^{-v²}).
    pub w_zeq: T,
    /// Ratio of equivalent beam radius to twice the jitter deviation.
    pub xi: T,
}

impl<T: Real> PointingParams<T> {
    /// Compute the statistics from the three radii directly.
    pub fn from_radii(r: T, w_z: T, sigma_s: T) -> Result<Self> {
        for (param, value) in [("r", r), ("w_z", w_z), ("sigma_s", sigma_s)] {
            if !(value.is_finite() && value > T::zero()) {
                return Err(Error::Domain {
                    func: "PointingParams::from_radii",
                    param,
                    value: to_f64(value),
                    constraint: "strictly positive and finite",
                });
            }
        }
        let v = T::PI().sqrt() * r / (real::<T>(2.0).sqrt() * w_z);
        let gauss = (-v * v).exp();
        if gauss == T::zero() {
            // e^{-v²} underflowed; w_zeq would be infinite
            return Err(Error::Domain {
                func: "PointingParams::from_radii",
                param: "v",
                value: to_f64(v),
                constraint: "e^{-v^2} representable (aperture far larger than beam waist)",
            });
        }
        let erf_v = erf(v)?;
        let a0 = erf_v * erf_v;
        let w_zeq_sq = w_z * w_z * T::PI().sqrt() * erf_v / (real::<T>(2.0) * v * gauss);
        let w_zeq = w_zeq_sq.sqrt();
        let xi = w_zeq / (real::<T>(2.0) * sigma_s);
        if !(w_zeq.is_finite() && xi.is_finite()) {
            return Err(Error::Domain {
                func: "PointingParams::from_radii",
                param: "v",
                value: to_f64(v),
                constraint: "finite equivalent beam radius",
            });
        }
        Ok(Self { v, a0, w_zeq, xi })
    }
}

/// Pointing statistics of a full link geometry.
pub fn pointing_params<T: Real>(geom: &BeamGeometry<T>) -> Result<PointingParams<T>> {
    PointingParams::from_radii(
        geom.aperture_radius_r,
        geom.beam_waist_wz,
        geom.jitter_sigma_s,
    )
}

/// Number of samples used to screen ξ(w_z) for monotonicity on a bracket.
const MONOTONICITY_SCAN: usize = 33;

/// Invert ξ(w_z) for fixed aperture radius and jitter: find the beam waist
/// in `(wz_lo, wz_hi)` whose pointing statistics give `xi_target`.
///
/// ξ(w_z) is not assumed monotone globally; the bracket must straddle the
/// target and is screened at 33 points for a direction change before
/// root-finding. Converges to |ξ(w_z) - ξ*| ≤ 1e-9 ξ*.
pub fn beam_width_for_xi<T: Real>(xi_target: T, r: T, sigma_s: T, bracket: (T, T)) -> Result<T> {
    let (lo, hi) = bracket;
    if !(xi_target.is_finite() && xi_target > T::zero()) {
        return Err(Error::Domain {
            func: "beam_width_for_xi",
            param: "xi_target",
            value: to_f64(xi_target),
            constraint: "xi_target > 0",
        });
    }
    if !(lo.is_finite() && hi.is_finite() && T::zero() < lo && lo < hi) {
        return Err(Error::Domain {
            func: "beam_width_for_xi",
            param: "bracket",
            value: to_f64(lo),
            constraint: "0 < wz_lo < wz_hi",
        });
    }

    let xi_of = |wz: T| PointingParams::from_radii(r, wz, sigma_s).map(|p| p.xi);

    // monotonicity screen
    let mut prev = xi_of(lo)?;
    let mut direction = T::zero();
    for k in 1..MONOTONICITY_SCAN {
        let frac = real::<T>(k as f64 / (MONOTONICITY_SCAN - 1) as f64);
        let wz = lo + (hi - lo) * frac;
        let cur = xi_of(wz)?;
        let step = cur - prev;
        if step != T::zero() {
            if direction != T::zero() && (step > T::zero()) != (direction > T::zero()) {
                return Err(Error::NonMonotonicBracket {
                    func: "beam_width_for_xi",
                    lo: to_f64(lo),
                    hi: to_f64(hi),
                });
            }
            direction = step;
        }
        prev = cur;
    }

    let g = |wz: T| xi_of(wz).map(|xi| xi - xi_target);
    let tol = real::<T>(1e-9) * xi_target;
    let root = bracket_root("beam_width_for_xi", &g, lo, hi, real::<T>(0.0), tol, 200)?;
    Ok(root.x)
}
