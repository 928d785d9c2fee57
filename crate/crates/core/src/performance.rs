//! SNR definitions, outage probability, MPSK/DPSK conditional and average
//! BER closed forms, and the link budget / responsivity chain.
//!
//! The average SNR is the electrical quantity γ_avg = 2 P_T² ρ² / σ_n², and
//! the instantaneous SNR conditioned on the combined irradiance I is
//! γ_avg I². All BER and outage formulas operate on (γ_avg, [`ChannelParams`])
//! directly; converting a physical link budget into γ_avg is a separate,
//! explicit step so each stage can be pinned by tests.

use crate::channel::{combined_cdf_power_law, ChannelParams};
use crate::error::{to_f64, Error, Result};
use crate::geometry::BeamGeometry;
use crate::real::{real, Real};
use crate::specfun::{erfc_raw, ln_gamma_raw};

/// Electrical average SNR (linear power ratio).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrSpec<T> {
    gamma_avg: T,
}

impl<T: Real> SnrSpec<T> {
    /// From the linear average SNR directly.
    pub fn from_linear(gamma_avg: T) -> Result<Self> {
        if !(gamma_avg.is_finite() && gamma_avg > T::zero()) {
            return Err(Error::Domain {
                func: "SnrSpec::from_linear",
                param: "gamma_avg",
                value: to_f64(gamma_avg),
                constraint: "gamma_avg > 0",
            });
        }
        Ok(Self { gamma_avg })
    }

    /// From a value in dB: γ_avg = 10^{dB/10}.
    pub fn from_db(db: T) -> Result<Self> {
        if !db.is_finite() {
            return Err(Error::NonFinite {
                func: "SnrSpec::from_db",
                param: "db",
                value: to_f64(db),
            });
        }
        Self::from_linear(real::<T>(10.0).powf(db / real::<T>(10.0)))
    }

    /// From transmit power (W), detector responsivity (A/W), and noise
    /// standard deviation (A): γ_avg = 2 (P_T ρ / σ_n)².
    pub fn from_components(p_t: T, rho: T, sigma_n: T) -> Result<Self> {
        for (param, value) in [("p_t", p_t), ("rho", rho), ("sigma_n", sigma_n)] {
            if !(value.is_finite() && value > T::zero()) {
                return Err(Error::Domain {
                    func: "SnrSpec::from_components",
                    param,
                    value: to_f64(value),
                    constraint: "strictly positive",
                });
            }
        }
        let ratio = p_t * rho / sigma_n;
        Self::from_linear(real::<T>(2.0) * ratio * ratio)
    }

    pub fn gamma_avg(&self) -> T {
        self.gamma_avg
    }
}

/// Modulation choice: M-ary PSK (M a power of two) or differential BPSK.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Modulation {
    Mpsk { m: u32 },
    Dpsk,
}

impl Modulation {
    pub fn mpsk(m: u32) -> Result<Self> {
        validate_m(m)?;
        Ok(Self::Mpsk { m })
    }

    pub const fn bpsk() -> Self {
        Self::Mpsk { m: 2 }
    }

    pub const fn qpsk() -> Self {
        Self::Mpsk { m: 4 }
    }
}

fn validate_m(m: u32) -> Result<()> {
    if m < 2 || !m.is_power_of_two() {
        return Err(Error::Domain {
            func: "mpsk_params",
            param: "m",
            value: m as f64,
            constraint: "M a power of two, M >= 2",
        });
    }
    Ok(())
}

/// Modulation-dependent constants of an M-point PSK constellation.
#[derive(Debug, Clone, PartialEq)]
pub struct MpskParams<T> {
    /// ζ_M = 2 / max(log₂ M, 2).
    pub zeta: T,
    /// τ_M = max(M/4, 1) terms in the conditional-BER sum.
    pub tau: u32,
    /// a_p = √2 sin((2p - 1)π/M), p = 1..τ.
    pub a: Vec<T>,
}

/// Constellation constants for M-ary PSK.
pub fn mpsk_params<T: Real>(m: u32) -> Result<MpskParams<T>> {
    validate_m(m)?;
    let mf = real::<T>(m as f64);
    let log2m = real::<T>((m as f64).log2());
    let zeta = real::<T>(2.0) / log2m.max(real::<T>(2.0));
    let tau = (m / 4).max(1);
    let sqrt2 = real::<T>(2.0).sqrt();
    let a = (1..=tau)
        .map(|p| {
            let arg = real::<T>((2 * p - 1) as f64) * T::PI() / mf;
            sqrt2 * arg.sin()
        })
        .collect();
    Ok(MpskParams { zeta, tau, a })
}

/// Physical link-budget inputs. Gains, efficiencies, and losses default to
/// unity; background power and dark current are carried for completeness
/// but compensated to zero in the detection model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget<T> {
    /// Transmit power (W).
    pub p_t: T,
    /// Transmitter / receiver telescope gains.
    pub g_t: T,
    pub g_r: T,
    /// Transmitter / receiver optical efficiencies, in (0, 1].
    pub eta_t: T,
    pub eta_r: T,
    /// Atmospheric and transmitter-pointing loss factors, in (0, 1].
    pub l_a: T,
    pub l_t: T,
    /// Detector quantum efficiency, in (0, 1].
    pub eta_q: T,
    /// Background radiation power (W) and dark current (A).
    pub p_b_background: T,
    pub i_d_dark: T,
}

impl<T: Real> LinkBudget<T> {
    /// Lossless unit-gain budget with the given transmit power.
    pub fn new(p_t: T) -> Result<Self> {
        if !(p_t.is_finite() && p_t > T::zero()) {
            return Err(Error::Domain {
                func: "LinkBudget::new",
                param: "p_t",
                value: to_f64(p_t),
                constraint: "p_t > 0",
            });
        }
        Ok(Self {
            p_t,
            g_t: T::one(),
            g_r: T::one(),
            eta_t: T::one(),
            eta_r: T::one(),
            l_a: T::one(),
            l_t: T::one(),
            eta_q: T::one(),
            p_b_background: T::zero(),
            i_d_dark: T::zero(),
        })
    }

    pub fn with_gains(mut self, g_t: T, g_r: T) -> Self {
        self.g_t = g_t;
        self.g_r = g_r;
        self
    }

    pub fn with_efficiencies(mut self, eta_t: T, eta_r: T, eta_q: T) -> Self {
        self.eta_t = eta_t;
        self.eta_r = eta_r;
        self.eta_q = eta_q;
        self
    }

    pub fn with_losses(mut self, l_a: T, l_t: T) -> Self {
        self.l_a = l_a;
        self.l_t = l_t;
        self
    }
}

/// Received optical power for pointing gain `h` and aggregate turbulence
/// gain `i_prime`.
///
/// Full mode multiplies the transmit power by every gain, efficiency, loss,
/// and the free-space factor (λ/4πd)². Simplified mode keeps only
/// P_T·h·I′, the unit-gain lossless approximation.
pub fn received_power<T: Real>(
    lb: &LinkBudget<T>,
    geom: &BeamGeometry<T>,
    h: T,
    i_prime: T,
    simplified: bool,
) -> T {
    let base = lb.p_t * h * i_prime;
    if simplified {
        return base;
    }
    let four_pi_d = real::<T>(4.0) * T::PI() * geom.distance_d;
    let free_space = geom.wavelength_lambda / four_pi_d;
    base * lb.eta_t * lb.eta_r * free_space * free_space * lb.g_t * lb.g_r * lb.l_a * lb.l_t
}

/// Electron charge (C).
const ELECTRON_CHARGE: f64 = 1.602_176_634e-19;
/// Planck constant (J·s).
const PLANCK: f64 = 6.626_069e-34;
/// Speed of light (m/s).
const LIGHT_SPEED: f64 = 2.997_924_58e8;

/// Detector responsivity ρ = η_q q λ / (h₀ c) in A/W.
pub fn responsivity<T: Real>(eta_q: T, lambda: T) -> Result<T> {
    if !(eta_q.is_finite() && eta_q > T::zero() && eta_q <= T::one()) {
        return Err(Error::Domain {
            func: "responsivity",
            param: "eta_q",
            value: to_f64(eta_q),
            constraint: "0 < eta_q <= 1",
        });
    }
    if !(lambda.is_finite() && lambda > T::zero()) {
        return Err(Error::Domain {
            func: "responsivity",
            param: "lambda",
            value: to_f64(lambda),
            constraint: "lambda > 0",
        });
    }
    Ok(eta_q * real::<T>(ELECTRON_CHARGE / (PLANCK * LIGHT_SPEED)) * lambda)
}

/// Outage probability with a range annotation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageProbability<T> {
    /// F_I(√(γ_th/γ_avg)) under the power-law CDF.
    pub value: T,
    /// Set when the power-law CDF exceeded one, i.e. the requested point is
    /// outside the approximation's validity range.
    pub out_of_model: bool,
}

/// Probability that the instantaneous electrical SNR γ_avg I² falls below
/// `gamma_th`, under the power-law CDF. Identically equal to
/// `combined_cdf_power_law(√(γ_th/γ_avg))`.
pub fn outage_probability<T: Real>(
    gamma_th: T,
    snr: &SnrSpec<T>,
    p: &ChannelParams<T>,
) -> Result<OutageProbability<T>> {
    if !(gamma_th.is_finite() && gamma_th > T::zero()) {
        return Err(Error::Domain {
            func: "outage_probability",
            param: "gamma_th",
            value: to_f64(gamma_th),
            constraint: "gamma_th > 0",
        });
    }
    let value = combined_cdf_power_law((gamma_th / snr.gamma_avg).sqrt(), p);
    Ok(OutageProbability {
        value,
        out_of_model: value > T::one(),
    })
}

/// Conditional-BER kernel reusable across many irradiance evaluations.
#[derive(Debug, Clone)]
pub(crate) enum BerKernel<T> {
    Mpsk(MpskParams<T>),
    Dpsk,
}

impl<T: Real> BerKernel<T> {
    pub(crate) fn new(modulation: Modulation) -> Result<Self> {
        Ok(match modulation {
            Modulation::Mpsk { m } => Self::Mpsk(mpsk_params(m)?),
            Modulation::Dpsk => Self::Dpsk,
        })
    }

    /// BER conditioned on combined irradiance `i` at average SNR `gamma`.
    pub(crate) fn eval(&self, i: T, gamma_avg: T) -> T {
        let half = real::<T>(0.5);
        match self {
            Self::Mpsk(params) => {
                // P_T ρ / σ_n = √(γ_avg / 2)
                let scale = (gamma_avg * half).sqrt() * i;
                let mut sum = T::zero();
                for &a_p in &params.a {
                    sum += erfc_raw(a_p * scale);
                }
                half * params.zeta * sum
            }
            Self::Dpsk => half * (-gamma_avg * i * i).exp(),
        }
    }
}

/// BER conditioned on the combined irradiance `I`.
///
/// MPSK: (ζ/2) Σ_p erfc(a_p √(γ_avg/2) I). DPSK: ½ e^{-γ_avg I²}.
/// Always in [0, 1].
pub fn ber_conditional<T: Real>(modulation: Modulation, i: T, snr: &SnrSpec<T>) -> Result<T> {
    if !(i.is_finite() && i >= T::zero()) {
        return Err(Error::Domain {
            func: "ber_conditional",
            param: "i",
            value: to_f64(i),
            constraint: "i >= 0",
        });
    }
    Ok(BerKernel::new(modulation)?.eval(i, snr.gamma_avg))
}

/// log of one MPSK average-BER term, for constellation coefficient `a_p`.
fn ln_mpsk_term<T: Real>(zeta: T, a_p: T, mn: T, xi_sq: T, a0: T, gamma: T) -> T {
    let half = real::<T>(0.5);
    let two = real::<T>(2.0);
    (zeta / (two * T::PI().sqrt())).ln()
        + ln_gamma_raw(mn - xi_sq + T::one())
        + ln_gamma_raw((xi_sq + T::one()) * half)
        - ln_gamma_raw(mn)
        + (xi_sq * half) * (two / (a0 * a0 * a_p * a_p * gamma)).ln()
}

/// ln of the MPSK closed-form average BER, stable near the gamma pole.
pub(crate) fn ln_ber_mpsk<T: Real>(m: u32, mn: u32, xi: T, a0: T, gamma: T) -> Result<T> {
    let params = mpsk_params::<T>(m)?;
    let mnf = real::<T>(mn as f64);
    let xi_sq = xi * xi;
    // log-sum-exp over the constellation terms
    let terms: Vec<T> = params
        .a
        .iter()
        .map(|&a_p| ln_mpsk_term(params.zeta, a_p, mnf, xi_sq, a0, gamma))
        .collect();
    let max = terms
        .iter()
        .copied()
        .fold(T::neg_infinity(), |m, t| m.max(t));
    let mut sum = T::zero();
    for &t in &terms {
        sum += (t - max).exp();
    }
    Ok(max + sum.ln())
}

/// Average BER of M-ary PSK under the power-law density: the closed form
/// Σ_p ζ/(2√π) Γ(MN-ξ²+1) Γ((ξ²+1)/2)/Γ(MN) (2/(A₀² a_p² γ))^{ξ²/2},
/// which is the exact integral of the conditional BER against that density.
pub fn ber_mpsk_closed<T: Real>(m: u32, snr: &SnrSpec<T>, p: &ChannelParams<T>) -> Result<T> {
    Ok(ln_ber_mpsk(m, p.paths_mn(), p.xi(), p.a0(), snr.gamma_avg())?.exp())
}

/// Which DPSK closed form to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DpskForm {
    /// The closed form as published for this channel:
    /// ξ²Γ(MN-ξ²+1)Γ(ξ²/2)/(2√2 Γ(MN)) (1/(A₀²γ))^{ξ²/4}.
    /// Kept verbatim for comparison; disagrees with the exact integral.
    Published,
    /// Exact average of the DPSK conditional BER against the power-law
    /// density: ξ²Γ(MN-ξ²+1)Γ(ξ²/2)/(4Γ(MN)) (A₀²γ)^{-ξ²/2}.
    Exact,
}

pub(crate) fn ln_ber_dpsk_exact<T: Real>(mn: u32, xi: T, a0: T, gamma: T) -> T {
    let mnf = real::<T>(mn as f64);
    let xi_sq = xi * xi;
    let half = real::<T>(0.5);
    xi_sq.ln() + ln_gamma_raw(mnf - xi_sq + T::one()) + ln_gamma_raw(xi_sq * half)
        - real::<T>(4.0).ln()
        - ln_gamma_raw(mnf)
        - (xi_sq * half) * (a0 * a0 * gamma).ln()
}

fn ln_ber_dpsk_published<T: Real>(mn: u32, xi: T, a0: T, gamma: T) -> T {
    let mnf = real::<T>(mn as f64);
    let xi_sq = xi * xi;
    let half = real::<T>(0.5);
    xi_sq.ln() + ln_gamma_raw(mnf - xi_sq + T::one()) + ln_gamma_raw(xi_sq * half)
        - (real::<T>(2.0) * real::<T>(2.0).sqrt()).ln()
        - ln_gamma_raw(mnf)
        - (xi_sq * real::<T>(0.25)) * (a0 * a0 * gamma).ln()
}

/// DPSK average BER in the selected closed form.
///
/// `Exact` matches quadrature of the defining integral; `Published` is kept
/// verbatim for comparison and generally disagrees — see
/// [`dpsk_form_discrepancy`] for the quantified gap.
pub fn ber_dpsk_closed<T: Real>(
    snr: &SnrSpec<T>,
    p: &ChannelParams<T>,
    form: DpskForm,
) -> Result<T> {
    let ln = match form {
        DpskForm::Exact => ln_ber_dpsk_exact(p.paths_mn(), p.xi(), p.a0(), snr.gamma_avg()),
        DpskForm::Published => ln_ber_dpsk_published(p.paths_mn(), p.xi(), p.a0(), snr.gamma_avg()),
    };
    Ok(ln.exp())
}

/// Relative gap |published - exact| / exact between the two DPSK closed
/// forms at these parameters. Gaps above 1e-6 mark a genuine disagreement
/// rather than roundoff.
pub fn dpsk_form_discrepancy<T: Real>(snr: &SnrSpec<T>, p: &ChannelParams<T>) -> Result<T> {
    let exact = ber_dpsk_closed(snr, p, DpskForm::Exact)?;
    let published = ber_dpsk_closed(snr, p, DpskForm::Published)?;
    Ok(((published - exact) / exact).abs())
}

/// Closed-form average BER for any modulation; DPSK uses the exact form.
pub fn ber_closed<T: Real>(
    modulation: Modulation,
    snr: &SnrSpec<T>,
    p: &ChannelParams<T>,
) -> Result<T> {
    match modulation {
        Modulation::Mpsk { m } => ber_mpsk_closed(m, snr, p),
        Modulation::Dpsk => ber_dpsk_closed(snr, p, DpskForm::Exact),
    }
}

/// How a BER number was produced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BerProvenance<T> {
    ClosedFormPublished,
    ClosedFormExact,
    Quadrature { abs_error: T },
    MonteCarlo { std_error: T },
}

/// A BER value together with its provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerEstimate<T> {
    pub value: T,
    pub provenance: BerProvenance<T>,
}
