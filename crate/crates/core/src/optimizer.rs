//! BER minimization over the pointing ratio ξ and over the physical beam
//! width: analytic log-BER derivatives, stationarity root-finding with a
//! golden-section fallback, and the geometry-coupled beam-width search.
//!
//! Two modes ship. `optimize_xi` treats (MN, A₀, γ_avg) as fixed and ξ as
//! free — the formula-level view, where A₀ stays frozen while ξ varies.
//! `optimize_beam_width` varies the physical beam waist, so ξ and A₀ move
//! together through the geometry map. The two answers differ in general.

use crate::error::{to_f64, Error, Result};
use crate::geometry::PointingParams;
use crate::performance::{ln_ber_dpsk_exact, ln_ber_mpsk, mpsk_params, Modulation, SnrSpec};
use crate::real::{real, Real};
use crate::solve::{bracket_root, golden_section_min};
use crate::specfun::digamma_raw;

/// How the optimum was located.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptMethod {
    /// Root of the analytic d ln BER / dξ, confirmed as a minimum.
    StationarityRoot,
    /// Golden-section minimization of ln BER (no interior sign change of
    /// the derivative was found).
    GoldenSection,
}

/// Result of a ξ optimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizationResult<T> {
    pub xi_star: T,
    pub ber_at_optimum: T,
    pub method: OptMethod,
    /// |d ln BER/dξ| at `xi_star`.
    pub derivative_residual: T,
    pub iterations: u32,
}

/// Margin keeping the search interval inside (0, √(MN+1)).
const FEASIBILITY_EPS: f64 = 1e-4;
/// Residual the stationarity root must reach.
const STATIONARITY_RESIDUAL_TOL: f64 = 1e-9;
/// Sign-change scan resolution over the feasible interval.
const SCAN_POINTS: usize = 64;

fn check_opt_inputs<T: Real>(mn: u32, a0: T) -> Result<()> {
    if mn == 0 {
        return Err(Error::Domain {
            func: "optimize_xi",
            param: "paths_mn",
            value: 0.0,
            constraint: "MN >= 1",
        });
    }
    if !(a0.is_finite() && a0 > T::zero() && a0 <= T::one()) {
        return Err(Error::Domain {
            func: "optimize_xi",
            param: "a0",
            value: to_f64(a0),
            constraint: "0 < A0 <= 1",
        });
    }
    Ok(())
}

/// Analytic d ln P_b / dξ of the closed-form average BER.
///
/// Single-term MPSK (M = 2, 4):
/// ξ [-2ψ(MN-ξ²+1) + ψ((ξ²+1)/2) - ln(A₀² a₁² γ/2)].
/// Larger constellations use the exact log-sum derivative Σ t_p'/Σ t_p,
/// each term carrying its own a_p in the bracket. DPSK (exact form):
/// 2/ξ + ξ [-2ψ(MN-ξ²+1) + ψ(ξ²/2) - ln(A₀² γ)].
pub fn dlog_ber_dxi<T: Real>(
    modulation: Modulation,
    xi: T,
    snr: &SnrSpec<T>,
    paths_mn: u32,
    a0: T,
) -> Result<T> {
    check_opt_inputs(paths_mn, a0)?;
    let mn = real::<T>(paths_mn as f64);
    let xi_sq = xi * xi;
    if !(xi > T::zero() && xi_sq < mn + T::one()) {
        return Err(Error::Domain {
            func: "dlog_ber_dxi",
            param: "xi",
            value: to_f64(xi),
            constraint: "0 < xi^2 < M*N + 1",
        });
    }
    let gamma = snr.gamma_avg();
    let two = real::<T>(2.0);
    let half = real::<T>(0.5);
    Ok(match modulation {
        Modulation::Mpsk { m } => {
            let params = mpsk_params::<T>(m)?;
            let psi_terms =
                -two * digamma_raw(mn - xi_sq + T::one()) + digamma_raw((xi_sq + T::one()) * half);
            if params.tau == 1 {
                let a1 = params.a[0];
                xi * (psi_terms - (a0 * a0 * a1 * a1 * gamma / two).ln())
            } else {
                // weights w_p ∝ a_p^{-ξ²}; shared Γ factors cancel
                let mut wsum = T::zero();
                let mut bsum = T::zero();
                let ln_common: Vec<T> = params.a.iter().map(|&a| -xi_sq * a.ln()).collect();
                let max = ln_common
                    .iter()
                    .copied()
                    .fold(T::neg_infinity(), |acc, t| acc.max(t));
                for (&a_p, &lw) in params.a.iter().zip(&ln_common) {
                    let w = (lw - max).exp();
                    let bracket = psi_terms - (a0 * a0 * a_p * a_p * gamma / two).ln();
                    wsum += w;
                    bsum += w * bracket;
                }
                xi * bsum / wsum
            }
        }
        Modulation::Dpsk => {
            let psi_terms = -two * digamma_raw(mn - xi_sq + T::one()) + digamma_raw(xi_sq * half);
            two / xi + xi * (psi_terms - (a0 * a0 * gamma).ln())
        }
    })
}

fn ln_ber<T: Real>(modulation: Modulation, mn: u32, xi: T, a0: T, gamma: T) -> Result<T> {
    match modulation {
        Modulation::Mpsk { m } => ln_ber_mpsk(m, mn, xi, a0, gamma),
        Modulation::Dpsk => Ok(ln_ber_dpsk_exact(mn, xi, a0, gamma)),
    }
}

/// Minimize the closed-form BER over ξ on (ε, √(MN+1) - ε) with A₀ frozen.
///
/// Scans 64 log-spaced points for a minus-to-plus sign change of
/// [`dlog_ber_dxi`], polishes the root by the bisection/secant hybrid, and
/// confirms the point beats both interval endpoints. Falls back to
/// golden-section minimization of ln BER when no crossing exists.
pub fn optimize_xi<T: Real>(
    modulation: Modulation,
    snr: &SnrSpec<T>,
    paths_mn: u32,
    a0: T,
) -> Result<OptimizationResult<T>> {
    check_opt_inputs(paths_mn, a0)?;
    let mn = real::<T>(paths_mn as f64);
    let eps = real::<T>(FEASIBILITY_EPS);
    let lo = eps;
    let hi = (mn + T::one()).sqrt() - eps;
    if !(lo < hi) {
        return Err(Error::Infeasible {
            func: "optimize_xi",
            what: format!(
                "empty feasible interval ({:?}, {:?})",
                to_f64(lo),
                to_f64(hi)
            ),
        });
    }
    let gamma = snr.gamma_avg();
    let deriv = |xi: T| dlog_ber_dxi(modulation, xi, snr, paths_mn, a0);
    let objective = |xi: T| {
        let v = ln_ber(modulation, paths_mn, xi, a0, gamma)?;
        if !v.is_finite() {
            return Err(Error::ObjectiveNotFinite {
                func: "optimize_xi",
                at: to_f64(xi),
            });
        }
        Ok(v)
    };

    // log-spaced scan for a minus-to-plus crossing
    let ratio = (hi / lo).ln() / real::<T>((SCAN_POINTS - 1) as f64);
    let grid: Vec<T> = (0..SCAN_POINTS)
        .map(|k| lo * (ratio * real::<T>(k as f64)).exp())
        .collect();
    let mut crossing: Option<(T, T)> = None;
    let mut prev: Option<(T, T)> = None;
    for &x in &grid {
        let d = deriv(x)?;
        if let Some((px, pd)) = prev {
            if pd < T::zero() && d >= T::zero() {
                crossing = Some((px, x));
                break;
            }
        }
        prev = Some((x, d));
    }

    if let Some((a, b)) = crossing {
        let root = bracket_root(
            "optimize_xi",
            &deriv,
            a,
            b,
            real::<T>(STATIONARITY_RESIDUAL_TOL),
            real::<T>(1e-12),
            200,
        )?;
        let ber_root = objective(root.x)?.exp();
        let ber_lo = objective(lo)?.exp();
        let ber_hi = objective(hi)?.exp();
        if ber_root <= ber_lo && ber_root <= ber_hi {
            return Ok(OptimizationResult {
                xi_star: root.x,
                ber_at_optimum: ber_root,
                method: OptMethod::StationarityRoot,
                derivative_residual: root.f.abs(),
                iterations: root.iterations,
            });
        }
    }

    // no usable stationary point: direct search on ln BER
    let min = golden_section_min(
        "optimize_xi",
        &objective,
        lo,
        hi,
        real::<T>(1e-9) * (hi - lo),
        300,
    )?;
    let residual = deriv(min.x)?.abs();
    Ok(OptimizationResult {
        xi_star: min.x,
        ber_at_optimum: min.fx.exp(),
        method: OptMethod::GoldenSection,
        derivative_residual: residual,
        iterations: min.iterations,
    })
}

/// Result of a physical beam-width optimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamWidthOptimum<T> {
    /// Minimizing beam waist (m).
    pub wz_star: T,
    /// Pointing ratio at the optimum.
    pub xi_star: T,
    /// Collected-power fraction at the optimum.
    pub a0_at_star: T,
    /// Closed-form BER at the optimum.
    pub ber: T,
    pub iterations: u32,
}

/// Number of bracket samples used to verify feasibility before the search.
const FEASIBILITY_SAMPLES: usize = 64;

/// Minimize the closed-form BER over the physical beam waist.
///
/// Both ξ(w_z) and A₀(w_z) vary through the geometry map. Golden-section
/// on ln BER to |Δw_z| ≤ 1e-8 (hi - lo); the bracket is checked up front so
/// every sampled waist yields ξ² < MN + 1.
pub fn optimize_beam_width<T: Real>(
    modulation: Modulation,
    snr: &SnrSpec<T>,
    paths_mn: u32,
    r: T,
    sigma_s: T,
    wz_bracket: (T, T),
) -> Result<BeamWidthOptimum<T>> {
    let (lo, hi) = wz_bracket;
    if !(lo.is_finite() && hi.is_finite() && T::zero() < lo && lo < hi) {
        return Err(Error::Domain {
            func: "optimize_beam_width",
            param: "wz_bracket",
            value: to_f64(lo),
            constraint: "0 < lo < hi",
        });
    }
    let mn = real::<T>(paths_mn as f64);
    let gamma = snr.gamma_avg();

    let stats = |wz: T| PointingParams::from_radii(r, wz, sigma_s);
    for k in 0..FEASIBILITY_SAMPLES {
        let frac = real::<T>(k as f64 / (FEASIBILITY_SAMPLES - 1) as f64);
        let wz = lo + (hi - lo) * frac;
        let p = stats(wz)?;
        if !(p.xi * p.xi < mn + T::one()) {
            return Err(Error::Infeasible {
                func: "optimize_beam_width",
                what: format!(
                    "xi^2 = {} at wz = {} exceeds M*N + 1 = {}",
                    to_f64(p.xi * p.xi),
                    to_f64(wz),
                    to_f64(mn + T::one()),
                ),
            });
        }
    }

    let objective = |wz: T| {
        let p = stats(wz)?;
        let v = ln_ber(modulation, paths_mn, p.xi, p.a0, gamma)?;
        if !v.is_finite() {
            return Err(Error::ObjectiveNotFinite {
                func: "optimize_beam_width",
                at: to_f64(wz),
            });
        }
        Ok(v)
    };
    let min = golden_section_min(
        "optimize_beam_width",
        &objective,
        lo,
        hi,
        real::<T>(1e-8) * (hi - lo),
        400,
    )?;
    let p = stats(min.x)?;
    Ok(BeamWidthOptimum {
        wz_star: min.x,
        xi_star: p.xi,
        a0_at_star: p.a0,
        ber: min.fx.exp(),
        iterations: min.iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::ChannelParams;
    use crate::performance::{ber_closed, ber_mpsk_closed};

    fn snr(gamma: f64) -> SnrSpec<f64> {
        SnrSpec::from_linear(gamma).unwrap()
    }

    #[test]
    fn derivative_matches_finite_differences_reference_point() {
        // BPSK, ξ = 3, MN = 36, A0 = 1, γ = 1
        let s = snr(1.0);
        let analytic = dlog_ber_dxi(Modulation::bpsk(), 3.0, &s, 36, 1.0).unwrap();
        let h = 1e-6;
        let f = |xi: f64| {
            ber_mpsk_closed(2, &s, &ChannelParams::new(36, xi, 1.0).unwrap())
                .unwrap()
                .ln()
        };
        let fd = (f(3.0 + h) - f(3.0 - h)) / (2.0 * h);
        assert!(
            ((analytic - fd) / fd).abs() < 1e-6,
            "analytic {analytic} vs fd {fd}"
        );
    }

    #[test]
    fn single_term_derivative_factors_as_xi_times_bracket() {
        // result/ξ equals the digamma-log bracket for BPSK at ξ = 2,
        // MN = 36, A0 = 1, γ = 1 (a₁² γ / 2 = 1, so the log term vanishes)
        let s = snr(1.0);
        let xi = 2.0_f64;
        let d = dlog_ber_dxi(Modulation::bpsk(), xi, &s, 36, 1.0).unwrap();
        let bracket = -2.0 * crate::specfun::digamma(36.0 - xi * xi + 1.0).unwrap()
            + crate::specfun::digamma((xi * xi + 1.0) / 2.0).unwrap();
        assert!(((d / xi - bracket) / bracket).abs() < 1e-12);
    }

    #[test]
    fn stationarity_residual_at_optimum() {
        let s = snr(1.0);
        let opt = optimize_xi(Modulation::bpsk(), &s, 36, 1.0).unwrap();
        assert_eq!(opt.method, OptMethod::StationarityRoot);
        assert!(
            opt.derivative_residual <= 1e-9,
            "{}",
            opt.derivative_residual
        );
        let d = dlog_ber_dxi(Modulation::bpsk(), opt.xi_star, &s, 36, 1.0).unwrap();
        assert!(d.abs() <= 1e-9);
    }

    #[test]
    fn six_by_six_bpsk_anchor() {
        // M = N = 6, γ_avg = 0 dB, A0 = 1: the optimum lands in [5.0, 6.0]
        let opt = optimize_xi(Modulation::bpsk(), &snr(1.0), 36, 1.0).unwrap();
        assert!(
            (5.0..=6.0).contains(&opt.xi_star),
            "xi_star = {}",
            opt.xi_star
        );
    }

    #[test]
    fn both_methods_agree() {
        for (modulation, mn, a0, gamma) in [
            (Modulation::bpsk(), 36u32, 1.0, 1.0),
            (Modulation::Dpsk, 36, 1.0, 10.0),
            (Modulation::Mpsk { m: 8 }, 16, 0.8, 30.0),
        ] {
            let s = snr(gamma);
            let root = optimize_xi(modulation, &s, mn, a0).unwrap();
            // independent direct search over ln BER
            let obj = |xi: f64| {
                Ok(
                    ber_closed(modulation, &s, &ChannelParams::new(mn, xi, a0).unwrap())
                        .unwrap()
                        .ln(),
                )
            };
            let lo = 1e-4;
            let hi = ((mn as f64) + 1.0).sqrt() - 1e-4;
            let golden =
                crate::solve::golden_section_min("test", &obj, lo, hi, 1e-10, 400).unwrap();
            assert!(
                (root.xi_star - golden.x).abs() <= 1e-3,
                "{modulation:?}: {} vs {}",
                root.xi_star,
                golden.x
            );
        }
    }

    #[test]
    fn local_minimality_probe() {
        let s = snr(10.0);
        let opt = optimize_xi(Modulation::Dpsk, &s, 36, 1.0).unwrap();
        let ber = |xi: f64| {
            ber_closed(
                Modulation::Dpsk,
                &s,
                &ChannelParams::new(36, xi, 1.0).unwrap(),
            )
            .unwrap()
        };
        let delta = 1e-3;
        assert!(ber(opt.xi_star + delta) > opt.ber_at_optimum);
        assert!(ber(opt.xi_star - delta) > opt.ber_at_optimum);
    }

    #[test]
    fn optimum_shifts_right_with_snr() {
        let mut prev = 0.0;
        for &gamma in &[1.0, 10.0, 100.0] {
            let opt = optimize_xi(Modulation::bpsk(), &snr(gamma), 36, 1.0).unwrap();
            assert!(
                opt.xi_star >= prev,
                "xi_star regressed at γ = {gamma}: {} < {prev}",
                opt.xi_star
            );
            prev = opt.xi_star;
        }
    }

    #[test]
    fn beam_width_optimum_beats_endpoints_and_is_idempotent() {
        // ξ(w_z) is U-shaped, so BER(w_z) has one basin per branch; this
        // bracket isolates the interior minimum on the rising branch
        let s = snr(1.0);
        let (r, sigma) = (0.05, 0.05);
        let opt = optimize_beam_width(Modulation::bpsk(), &s, 36, r, sigma, (0.10, 0.30)).unwrap();
        let ber_at = |wz: f64| {
            let p = PointingParams::from_radii(r, wz, sigma).unwrap();
            ber_closed(
                Modulation::bpsk(),
                &s,
                &ChannelParams::new(36, p.xi, p.a0).unwrap(),
            )
            .unwrap()
        };
        assert!(opt.wz_star > 0.10 && opt.wz_star < 0.30);
        assert!(opt.ber <= ber_at(0.10));
        assert!(opt.ber <= ber_at(0.30));

        let tight = optimize_beam_width(
            Modulation::bpsk(),
            &s,
            36,
            r,
            sigma,
            (opt.wz_star * 0.9, opt.wz_star * 1.1),
        )
        .unwrap();
        assert!(
            ((tight.wz_star - opt.wz_star) / opt.wz_star).abs() < 1e-5,
            "{} vs {}",
            tight.wz_star,
            opt.wz_star
        );
    }

    #[test]
    fn beam_width_matches_dense_grid_scan() {
        let s = snr(1.0);
        let (r, sigma, lo, hi) = (0.05, 0.05, 0.10, 0.30);
        let opt = optimize_beam_width(Modulation::bpsk(), &s, 36, r, sigma, (lo, hi)).unwrap();
        // independent oracle: 10^4-point grid scan
        let n = 10_000;
        let mut best = (f64::INFINITY, 0.0);
        for k in 0..=n {
            let wz = lo + (hi - lo) * k as f64 / n as f64;
            let p = PointingParams::from_radii(r, wz, sigma).unwrap();
            let b = ber_closed(
                Modulation::bpsk(),
                &s,
                &ChannelParams::new(36, p.xi, p.a0).unwrap(),
            )
            .unwrap();
            if b < best.0 {
                best = (b, wz);
            }
        }
        let cell = (hi - lo) / n as f64;
        assert!(
            (opt.wz_star - best.1).abs() <= cell,
            "golden {} vs grid {}",
            opt.wz_star,
            best.1
        );
    }

    #[test]
    fn infeasible_bracket_is_rejected() {
        // at wz = 0.01 the equivalent beam radius explodes (beam far
        // narrower than the aperture) and ξ² leaves the gamma domain
        let err = optimize_beam_width(Modulation::bpsk(), &snr(1.0), 36, 0.05, 0.05, (0.01, 2.0))
            .unwrap_err();
        assert!(matches!(err, Error::Infeasible { .. }), "{err:?}");
    }
}
