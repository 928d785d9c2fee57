//! Scalar solvers: a bracketing bisection/secant hybrid for roots and
//! golden-section search for minima. Derivative-free and deterministic.

use crate::error::{to_f64, Error, Result};
use crate::real::{real, Real};

#[derive(Debug)]
pub(crate) struct RootResult<T> {
    pub x: T,
    pub f: T,
    pub iterations: u32,
}

/// Find a root of `f` on `[lo, hi]`, which must straddle a sign change.
///
/// Takes a secant step when it stays well inside the bracket and makes
/// decent progress, otherwise bisects. Terminates when the bracket width
/// drops below `xtol` or |f| below `ftol` (either may be zero to disable).
pub(crate) fn bracket_root<T: Real, F: Fn(T) -> Result<T>>(
    func: &'static str,
    f: &F,
    lo: T,
    hi: T,
    ftol: T,
    xtol: T,
    max_iter: u32,
) -> Result<RootResult<T>> {
    let mut a = lo;
    let mut b = hi;
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == T::zero() {
        return Ok(RootResult {
            x: a,
            f: fa,
            iterations: 0,
        });
    }
    if fb == T::zero() {
        return Ok(RootResult {
            x: b,
            f: fb,
            iterations: 0,
        });
    }
    if (fa > T::zero()) == (fb > T::zero()) {
        return Err(Error::NoSignChange {
            func,
            lo: to_f64(lo),
            hi: to_f64(hi),
        });
    }

    let mut iterations = 0;
    let mut x = a;
    let mut fx = fa;
    while iterations < max_iter {
        iterations += 1;
        let mid = real::<T>(0.5) * (a + b);
        // secant candidate from the bracket endpoints
        let denom = fb - fa;
        let secant = if denom != T::zero() {
            b - fb * (b - a) / denom
        } else {
            mid
        };
        let width = b - a;
        let margin = real::<T>(0.01) * width;
        x = if secant > a + margin && secant < b - margin {
            secant
        } else {
            mid
        };
        fx = f(x)?;
        if !fx.is_finite() {
            return Err(Error::ObjectiveNotFinite {
                func,
                at: to_f64(x),
            });
        }
        if fx == T::zero() || (ftol > T::zero() && fx.abs() <= ftol) {
            return Ok(RootResult {
                x,
                f: fx,
                iterations,
            });
        }
        if (fx > T::zero()) == (fa > T::zero()) {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        if b - a <= xtol {
            // midpoint of the final bracket, but keep the best evaluation
            let (xm, fm) = if fa.abs() < fb.abs() {
                (a, fa)
            } else {
                (b, fb)
            };
            if fm.abs() < fx.abs() {
                return Ok(RootResult {
                    x: xm,
                    f: fm,
                    iterations,
                });
            }
            return Ok(RootResult {
                x,
                f: fx,
                iterations,
            });
        }
    }
    Ok(RootResult {
        x,
        f: fx,
        iterations,
    })
}

pub(crate) struct MinResult<T> {
    pub x: T,
    pub fx: T,
    pub iterations: u32,
}

/// Golden-section minimization of a unimodal `f` on `[lo, hi]` to an
/// x-resolution of `xtol`.
pub(crate) fn golden_section_min<T: Real, F: Fn(T) -> Result<T>>(
    func: &'static str,
    f: &F,
    lo: T,
    hi: T,
    xtol: T,
    max_iter: u32,
) -> Result<MinResult<T>> {
    let inv_phi = real::<T>(0.618_033_988_749_894_8);
    let mut a = lo;
    let mut b = hi;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let mut iterations = 0;
    while iterations < max_iter && (b - a) > xtol {
        iterations += 1;
        if !(fc.is_finite() && fd.is_finite()) {
            let at = if fc.is_finite() { d } else { c };
            return Err(Error::ObjectiveNotFinite {
                func,
                at: to_f64(at),
            });
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    let (x, fx) = if fc < fd { (c, fc) } else { (d, fd) };
    Ok(MinResult { x, fx, iterations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_of_cosine() {
        let r = bracket_root("test", &|x: f64| Ok(x.cos()), 1.0, 2.0, 0.0, 1e-12, 200).unwrap();
        assert!((r.x - std::f64::consts::FRAC_PI_2).abs() < 1e-10);
    }

    #[test]
    fn no_sign_change_is_reported() {
        let err = bracket_root(
            "test",
            &|x: f64| Ok(x * x + 1.0),
            -1.0,
            1.0,
            0.0,
            1e-12,
            100,
        )
        .unwrap_err();
        assert!(matches!(err, Error::NoSignChange { .. }));
    }

    #[test]
    fn golden_section_finds_parabola_min() {
        let r = golden_section_min(
            "test",
            &|x: f64| Ok((x - 1.7).powi(2)),
            0.0,
            5.0,
            1e-10,
            300,
        )
        .unwrap();
        assert!((r.x - 1.7).abs() < 1e-8);
    }
}
