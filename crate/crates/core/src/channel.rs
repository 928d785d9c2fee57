//! Statistical model of the combined irradiance I = h·I′ for an MN-path
//! link: pointing-error pdf, aggregate turbulence pdf/MGF, the combined
//! pdf in two variants, and inverse-CDF samplers.
//!
//! The aggregate turbulence gain I′ is the sum of MN independent unit-mean
//! exponential path gains, i.e. Gamma(MN, 1). The pointing gain h lives on
//! (0, A₀] with pdf ξ²/A₀^{ξ²} h^{ξ²-1}.
//!
//! Two forms of the density of I ship. [`PdfVariant::PowerLaw`] is the
//! closed power-law form obtained by integrating the conditioning integral
//! over all of (0, ∞) without the h ≤ A₀ support constraint; it is what the
//! closed-form BER and outage expressions are built on, but it does not
//! normalize. [`PdfVariant::Exact`] imposes the support constraint
//! (I′ ≥ i/A₀) and is a true density; the verification layer uses it as
//! ground truth and reports the gap between the two.

use crate::error::{to_f64, Error, Result};
use crate::real::{real, Real};
use crate::rng::CounterRng;
use crate::specfun::{ln_gamma_raw, ln_upper_inc_gamma_raw};

/// The parameter triple (MN, ξ, A₀) behind every pdf/CDF/BER formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams<T> {
    paths_mn: u32,
    xi: T,
    a0: T,
}

impl<T: Real> ChannelParams<T> {
    /// `paths_mn` is the product of transmit and receive aperture counts.
    /// Requires ξ² < MN + 1 so the gamma factors stay on the positive axis.
    pub fn new(paths_mn: u32, xi: T, a0: T) -> Result<Self> {
        if paths_mn == 0 {
            return Err(Error::Domain {
                func: "ChannelParams::new",
                param: "paths_mn",
                value: 0.0,
                constraint: "MN >= 1",
            });
        }
        if !(xi.is_finite() && xi > T::zero()) {
            return Err(Error::Domain {
                func: "ChannelParams::new",
                param: "xi",
                value: to_f64(xi),
                constraint: "xi > 0",
            });
        }
        if !(a0.is_finite() && a0 > T::zero() && a0 <= T::one()) {
            return Err(Error::Domain {
                func: "ChannelParams::new",
                param: "a0",
                value: to_f64(a0),
                constraint: "0 < A0 <= 1",
            });
        }
        let mn = real::<T>(paths_mn as f64);
        if !(xi * xi < mn + T::one()) {
            return Err(Error::Domain {
                func: "ChannelParams::new",
                param: "xi",
                value: to_f64(xi),
                constraint: "xi^2 < M*N + 1",
            });
        }
        Ok(Self { paths_mn, xi, a0 })
    }

    pub fn paths_mn(&self) -> u32 {
        self.paths_mn
    }

    pub fn xi(&self) -> T {
        self.xi
    }

    pub fn xi_sq(&self) -> T {
        self.xi * self.xi
    }

    pub fn a0(&self) -> T {
        self.a0
    }

    pub(crate) fn mn_real(&self) -> T {
        real::<T>(self.paths_mn as f64)
    }
}

/// Which form of the combined-irradiance density to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PdfVariant {
    /// Closed power-law form; valid as a small-argument approximation and
    /// the basis of the closed-form BER/outage expressions.
    PowerLaw,
    /// Conditioning integral with the h ≤ A₀ support constraint imposed;
    /// normalizes to one. Requires ξ² < MN.
    Exact,
}

/// Pointing-error pdf f_h(h) = ξ²/A₀^{ξ²} h^{ξ²-1} on (0, A₀], zero outside.
pub fn pointing_pdf<T: Real>(h: T, p: &ChannelParams<T>) -> T {
    if h <= T::zero() || h > p.a0 {
        return T::zero();
    }
    let q = p.xi_sq();
    q * (p.a0.powf(-q)) * h.powf(q - T::one())
}

/// Aggregate turbulence pdf: Gamma(MN, 1), i.e. I′^{MN-1} e^{-I′} / Γ(MN).
pub fn turbulence_pdf<T: Real>(i: T, paths_mn: u32) -> T {
    if i < T::zero() {
        return T::zero();
    }
    let mn = real::<T>(paths_mn as f64);
    if i == T::zero() {
        return if paths_mn == 1 { T::one() } else { T::zero() };
    }
    ((mn - T::one()) * i.ln() - i - ln_gamma_raw(mn)).exp()
}

/// MGF of the aggregate turbulence gain: (1/(s+1))^{MN} for s > -1.
pub fn turbulence_mgf<T: Real>(s: T, paths_mn: u32) -> Result<T> {
    if !(s > -T::one()) {
        return Err(Error::Domain {
            func: "turbulence_mgf",
            param: "s",
            value: to_f64(s),
            constraint: "s > -1",
        });
    }
    Ok((s + T::one()).powi(-(paths_mn as i32)))
}

/// Density of the combined irradiance I = h·I′ at `i > 0`.
///
/// `PowerLaw` requires ξ² < MN + 1 (guaranteed by [`ChannelParams`]);
/// `Exact` additionally requires ξ² < MN.
pub fn combined_pdf<T: Real>(i: T, p: &ChannelParams<T>, variant: PdfVariant) -> Result<T> {
    if !(i > T::zero()) {
        return Err(Error::Domain {
            func: "combined_pdf",
            param: "i",
            value: to_f64(i),
            constraint: "i > 0",
        });
    }
    check_variant(p, variant)?;
    Ok(combined_pdf_raw(i, p, variant))
}

pub(crate) fn check_variant<T: Real>(p: &ChannelParams<T>, variant: PdfVariant) -> Result<()> {
    if variant == PdfVariant::Exact && !(p.xi_sq() < p.mn_real()) {
        return Err(Error::Domain {
            func: "combined_pdf",
            param: "xi",
            value: to_f64(p.xi),
            constraint: "xi^2 < M*N for the exact variant",
        });
    }
    Ok(())
}

/// Density without the domain checks; `i > 0` and variant guards assumed.
pub(crate) fn combined_pdf_raw<T: Real>(i: T, p: &ChannelParams<T>, variant: PdfVariant) -> T {
    let q = p.xi_sq();
    let mn = p.mn_real();
    let common = q.ln() + (q - T::one()) * i.ln() - q * p.a0.ln() - ln_gamma_raw(mn);
    match variant {
        PdfVariant::PowerLaw => (common + ln_gamma_raw(mn - q + T::one())).exp(),
        PdfVariant::Exact => (common + ln_upper_inc_gamma_raw(mn - q, i / p.a0)).exp(),
    }
}

/// Antiderivative of the power-law density:
/// F(i) = Γ(MN - ξ² + 1)/(A₀^{ξ²} Γ(MN)) · i^{ξ²}.
///
/// Not clamped to [0, 1]; it exceeds one for large `i`, and callers that
/// need a probability must check the range themselves.
pub fn combined_cdf_power_law<T: Real>(i: T, p: &ChannelParams<T>) -> T {
    if i <= T::zero() {
        return T::zero();
    }
    let q = p.xi_sq();
    let mn = p.mn_real();
    (ln_gamma_raw(mn - q + T::one()) - ln_gamma_raw(mn) - q * p.a0.ln() + q * i.ln()).exp()
}

/// Inverse-CDF draw of the pointing gain: h = A₀ u^{1/ξ²} for u ∈ [0, 1].
pub fn sample_pointing<T: Real>(u: T, p: &ChannelParams<T>) -> T {
    p.a0 * u.powf(p.xi_sq().recip())
}

/// Unit-mean exponential draw from a uniform in [0, 1): -ln(1 - u).
#[inline]
pub fn unit_exponential<T: Real>(u: T) -> T {
    -(T::one() - u).ln()
}

/// Aggregate turbulence draw: sum of `paths_mn` unit exponentials, one
/// uniform consumed per path in path order.
pub fn sample_turbulence<T: Real>(rng: &mut CounterRng, paths_mn: u32) -> T {
    let mut sum = T::zero();
    for _ in 0..paths_mn {
        sum += unit_exponential(real::<T>(rng.next_f64()));
    }
    sum
}
