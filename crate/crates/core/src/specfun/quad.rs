//! Adaptive Gauss-Kronrod quadrature over the semi-infinite axis.
//!
//! `integrate_semi_infinite` maps (0, ∞) onto (0, 1) with the rational
//! transform x = t/(1-t), dx = dt/(1-t)², then subdivides adaptively with a
//! 7-15 Gauss-Kronrod rule, always splitting the segment with the largest
//! error estimate. Node abscissae are interior, so integrands with an
//! endpoint singularity (such as the x^{ξ²-1} channel densities) are never
//! evaluated at the singular point and converge through bisection toward it.

use crate::error::{to_f64, Error, Result};
use crate::real::{real, Real};

/// Outcome of an adaptive quadrature run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult<T> {
    /// Estimate of the integral.
    pub value: T,
    /// Rigorous-by-heuristic bound on the absolute error of `value`.
    pub abs_error_estimate: T,
    /// Number of integrand evaluations spent.
    pub evaluations: u32,
}

/// 15-point Kronrod abscissae on [-1, 1], positive half, descending.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

/// Kronrod weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

/// 7-point Gauss weights for the embedded rule (odd-index Kronrod nodes).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One Gauss-Kronrod application on [a, b].
fn gk15<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T) -> (T, T) {
    let half = real::<T>(0.5);
    let center = half * (a + b);
    let hlgth = half * (b - a);

    let fc = f(center);
    let mut resg = fc * real::<T>(WG[3]);
    let mut resk = fc * real::<T>(WGK[7]);
    let mut resabs = resk.abs();

    let mut fv = [T::zero(); 15];
    fv[7] = fc;
    for j in 0..7 {
        let x = hlgth * real::<T>(XGK[j]);
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv[j] = f1;
        fv[14 - j] = f2;
        let fsum = f1 + f2;
        let wk = real::<T>(WGK[j]);
        resk += wk * fsum;
        resabs += wk * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += real::<T>(WG[j / 2]) * fsum;
        }
    }

    let reskh = resk * half;
    let mut resasc = real::<T>(WGK[7]) * (fc - reskh).abs();
    for j in 0..7 {
        resasc += real::<T>(WGK[j]) * ((fv[j] - reskh).abs() + (fv[14 - j] - reskh).abs());
    }

    let result = resk * hlgth;
    let resabs = resabs * hlgth.abs();
    let resasc = resasc * hlgth.abs();
    let mut abserr = ((resk - resg) * hlgth).abs();
    if resasc != T::zero() && abserr != T::zero() {
        let ratio = (real::<T>(200.0) * abserr / resasc).powf(real::<T>(1.5));
        abserr = resasc * T::one().min(ratio);
    }
    let floor = real::<T>(50.0) * T::epsilon() * resabs;
    if floor > T::min_positive_value() {
        abserr = abserr.max(floor);
    }
    (result, abserr)
}

#[derive(Clone, Copy)]
struct Segment<T> {
    a: T,
    b: T,
    value: T,
    error: T,
    splittable: bool,
}

const MAX_EVALUATIONS: u32 = 2_000_000;

/// Adaptive GK15 on the finite interval [a, b], terminating when the summed
/// error estimate drops below `max(epsabs, epsrel * |value|)`.
pub(crate) fn adaptive_gk<T: Real, F: Fn(T) -> T>(
    f: &F,
    a: T,
    b: T,
    epsabs: T,
    epsrel: T,
) -> Result<QuadratureResult<T>> {
    let mut evaluations = 15u32;
    let (v, e) = gk15(f, a, b);
    let mut segments = vec![Segment {
        a,
        b,
        value: v,
        error: e,
        splittable: true,
    }];

    loop {
        // deterministic reduction: sum in storage order (stable across runs)
        let mut total = T::zero();
        let mut toterr = T::zero();
        for s in &segments {
            total += s.value;
            toterr += s.error;
        }
        let target = epsabs.max(epsrel * total.abs());
        if toterr <= target {
            return Ok(finish(segments, evaluations));
        }

        // split the splittable segment with the largest error estimate
        let mut worst: Option<usize> = None;
        for (i, s) in segments.iter().enumerate() {
            if s.splittable && worst.is_none_or(|w| s.error > segments[w].error) {
                worst = Some(i);
            }
        }
        let (i, mid) = match worst {
            Some(i) => {
                let s = &segments[i];
                let mid = real::<T>(0.5) * (s.a + s.b);
                if mid <= s.a || mid >= s.b {
                    // interval no longer representable; freeze it
                    segments[i].splittable = false;
                    continue;
                }
                (i, mid)
            }
            None => {
                return Err(Error::QuadratureDidNotConverge {
                    estimate: to_f64(total),
                    error_bound: to_f64(toterr),
                    tolerance: to_f64(target),
                    evaluations,
                })
            }
        };
        if evaluations + 30 > MAX_EVALUATIONS {
            return Err(Error::QuadratureDidNotConverge {
                estimate: to_f64(total),
                error_bound: to_f64(toterr),
                tolerance: to_f64(target),
                evaluations,
            });
        }

        let seg = segments[i];
        let (v1, e1) = gk15(f, seg.a, mid);
        let (v2, e2) = gk15(f, mid, seg.b);
        evaluations += 30;
        segments[i] = Segment {
            a: seg.a,
            b: mid,
            value: v1,
            error: e1,
            splittable: true,
        };
        segments.push(Segment {
            a: mid,
            b: seg.b,
            value: v2,
            error: e2,
            splittable: true,
        });
    }
}

fn finish<T: Real>(mut segments: Vec<Segment<T>>, evaluations: u32) -> QuadratureResult<T> {
    // fixed summation order: ascending left endpoint
    segments.sort_by(|p, q| p.a.partial_cmp(&q.a).expect("finite endpoints"));
    let mut value = T::zero();
    let mut err = T::zero();
    for s in &segments {
        value += s.value;
        err += s.error;
    }
    QuadratureResult {
        value,
        abs_error_estimate: err,
        evaluations,
    }
}

/// Default absolute tolerance for [`integrate_semi_infinite`].
pub const DEFAULT_QUAD_TOL: f64 = 1e-10;

/// Integrate `f` over (0, ∞) to absolute tolerance `tol` (callers without
/// a preference pass [`DEFAULT_QUAD_TOL`]).
///
/// `f` must be integrable and decay at infinity. On success the returned
/// `abs_error_estimate` is at most `tol`; if the evaluation budget is
/// exhausted first, the error carries the best estimate and its bound.
pub fn integrate_semi_infinite<T: Real, F: Fn(T) -> T>(
    f: F,
    tol: T,
) -> Result<QuadratureResult<T>> {
    if !(tol > T::zero()) {
        return Err(Error::Domain {
            func: "integrate_semi_infinite",
            param: "tol",
            value: to_f64(tol),
            constraint: "tol > 0",
        });
    }
    let g = transform_semi_infinite(f);
    adaptive_gk(&g, T::zero(), T::one(), tol, T::zero())
}

/// Relative-tolerance variant used by the verification layer.
pub(crate) fn integrate_semi_infinite_rel<T: Real, F: Fn(T) -> T>(
    f: F,
    rel_tol: T,
) -> Result<QuadratureResult<T>> {
    let g = transform_semi_infinite(f);
    adaptive_gk(&g, T::zero(), T::one(), real::<T>(1e-300), rel_tol)
}

fn transform_semi_infinite<T: Real, F: Fn(T) -> T>(f: F) -> impl Fn(T) -> T {
    move |t: T| {
        let om = T::one() - t;
        let x = t / om;
        let fx = f(x);
        if fx == T::zero() {
            return T::zero();
        }
        fx / (om * om)
    }
}
