//! Error function and complement, routed through the regularized
//! incomplete gamma pair: erf(x) = sign(x) P(1/2, x²), erfc(x) = Q(1/2, x²)
//! for x ≥ 0. The pair satisfies P + Q = 1 exactly, so erf(x) + erfc(x) = 1
//! holds to machine precision, and the large-x tail of erfc comes from the
//! continued fraction with no cancellation.

use super::gamma::inc_gamma_pair;
use crate::error::{to_f64, Error, Result};
use crate::real::{real, Real};

fn check_finite<T: Real>(func: &'static str, x: T) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::NonFinite {
            func,
            param: "x",
            value: to_f64(x),
        });
    }
    Ok(())
}

/// Error function erf(x) = (2/√π) ∫₀ˣ e^{-t²} dt. Odd; range [-1, 1].
pub fn erf<T: Real>(x: T) -> Result<T> {
    check_finite("erf", x)?;
    Ok(erf_raw(x))
}

pub(crate) fn erf_raw<T: Real>(x: T) -> T {
    if x == T::zero() {
        return T::zero();
    }
    let sign = if x < T::zero() { -T::one() } else { T::one() };
    let ax = x.abs();
    if ax > real::<T>(27.0) {
        return sign;
    }
    let (p, _) = inc_gamma_pair(real::<T>(0.5), ax * ax);
    sign * p
}

/// Complementary error function erfc(x) = 1 - erf(x). Range [0, 2];
/// strictly positive and cancellation-free for large positive x.
pub fn erfc<T: Real>(x: T) -> Result<T> {
    check_finite("erfc", x)?;
    Ok(erfc_raw(x))
}

pub(crate) fn erfc_raw<T: Real>(x: T) -> T {
    let ax = x.abs();
    if ax > real::<T>(27.0) {
        // erfc underflows around x = 26.6 in f64
        return if x > T::zero() {
            T::zero()
        } else {
            real::<T>(2.0)
        };
    }
    let (p, q) = inc_gamma_pair(real::<T>(0.5), ax * ax);
    if x >= T::zero() {
        q
    } else {
        T::one() + p
    }
}
