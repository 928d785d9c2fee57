//! Independent verification layer: Monte Carlo estimators and quadrature
//! evaluations that adjudicate every closed form and quantify the gap
//! between the power-law and exact channel densities.
//!
//! # Determinism
//!
//! Monte Carlo sampling is addressed, not iterated: samples are partitioned
//! into fixed blocks of [`MC_BLOCK`] draws, block `b` consumes stream `b`
//! of the master seed (see [`CounterRng`]), and the final reduction sums
//! per-block partial sums in ascending block order. Chunked parallel
//! execution assigns whole blocks to chunks, so the estimate is
//! bit-identical for any chunk count, including one.

use crate::channel::{
    check_variant, combined_pdf_raw, sample_pointing, sample_turbulence, ChannelParams, PdfVariant,
};
use crate::error::{to_f64, Error, Result};
use crate::performance::{ber_closed, ber_dpsk_closed, BerKernel, DpskForm, Modulation, SnrSpec};
use crate::real::{real, Real};
use crate::rng::CounterRng;
use crate::specfun::{integrate_semi_infinite_rel, QuadratureResult};

/// A Monte Carlo estimate with its sampling pedigree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate<T> {
    pub mean: T,
    /// Sample standard deviation divided by √n.
    pub std_error: T,
    pub n_samples: u64,
    pub seed: u64,
}

/// Samples per RNG stream block; the unit of deterministic parallelism.
pub const MC_BLOCK: u64 = 4096;

/// Expectation of `kernel(I)` over the exact combined irradiance law,
/// estimated from `n` samples split over `chunks` worker threads.
fn mc_expectation<T, K>(
    kernel: K,
    p: &ChannelParams<T>,
    n: u64,
    seed: u64,
    chunks: usize,
) -> Result<McEstimate<T>>
where
    T: Real,
    K: Fn(T) -> T + Sync,
{
    if n == 0 {
        return Err(Error::Domain {
            func: "mc_expectation",
            param: "n",
            value: 0.0,
            constraint: "n >= 1",
        });
    }
    let chunks = chunks.max(1);
    let n_blocks = n.div_ceil(MC_BLOCK);
    let mut block_sums = vec![(T::zero(), T::zero()); n_blocks as usize];

    let run_block = |b: u64, out: &mut (T, T)| {
        let mut rng = CounterRng::new(seed, b);
        let lo = b * MC_BLOCK;
        let hi = ((b + 1) * MC_BLOCK).min(n);
        let mut sum = T::zero();
        let mut sumsq = T::zero();
        for _ in lo..hi {
            let h = sample_pointing(real::<T>(rng.next_f64()), p);
            let i_prime = sample_turbulence::<T>(&mut rng, p.paths_mn());
            let x = kernel(h * i_prime);
            sum += x;
            sumsq += x * x;
        }
        *out = (sum, sumsq);
    };

    if chunks == 1 {
        for (b, out) in block_sums.iter_mut().enumerate() {
            run_block(b as u64, out);
        }
    } else {
        let blocks_per_chunk = (n_blocks as usize).div_ceil(chunks);
        std::thread::scope(|scope| {
            for (c, slice) in block_sums.chunks_mut(blocks_per_chunk).enumerate() {
                let run_block = &run_block;
                scope.spawn(move || {
                    for (off, out) in slice.iter_mut().enumerate() {
                        run_block((c * blocks_per_chunk + off) as u64, out);
                    }
                });
            }
        });
    }

    // fixed-order reduction over block index
    let mut sum = T::zero();
    let mut sumsq = T::zero();
    for &(s, s2) in &block_sums {
        sum += s;
        sumsq += s2;
    }
    let nf = real::<T>(n as f64);
    let mean = sum / nf;
    let std_error = if n > 1 {
        let var = ((sumsq - sum * sum / nf) / (nf - T::one())).max(T::zero());
        (var / nf).sqrt()
    } else {
        T::zero()
    };
    Ok(McEstimate {
        mean,
        std_error,
        n_samples: n,
        seed,
    })
}

/// Monte Carlo average BER: draws I = h·I′ from the samplers and averages
/// the conditional BER (no bit decisions are simulated). Deterministic for
/// fixed `(seed, n, params)` regardless of chunking.
pub fn mc_ber<T: Real>(
    modulation: Modulation,
    snr: &SnrSpec<T>,
    p: &ChannelParams<T>,
    n: u64,
    seed: u64,
) -> Result<McEstimate<T>> {
    mc_ber_chunked(modulation, snr, p, n, seed, 1)
}

/// [`mc_ber`] with an explicit worker-chunk count.
pub fn mc_ber_chunked<T: Real>(
    modulation: Modulation,
    snr: &SnrSpec<T>,
    p: &ChannelParams<T>,
    n: u64,
    seed: u64,
    chunks: usize,
) -> Result<McEstimate<T>> {
    let kernel = BerKernel::new(modulation)?;
    let gamma = snr.gamma_avg();
    mc_expectation(move |i| kernel.eval(i, gamma), p, n, seed, chunks)
}

/// Monte Carlo outage probability: the empirical fraction of samples with
/// γ_avg I² ≤ γ_th.
pub fn mc_outage<T: Real>(
    gamma_th: T,
    snr: &SnrSpec<T>,
    p: &ChannelParams<T>,
    n: u64,
    seed: u64,
) -> Result<McEstimate<T>> {
    let gamma = snr.gamma_avg();
    mc_expectation(
        move |i| {
            if gamma * i * i <= gamma_th {
                T::one()
            } else {
                T::zero()
            }
        },
        p,
        n,
        seed,
        1,
    )
}

/// Average BER by adaptive quadrature of ∫ pdf(i) · BER(e|i) di over
/// (0, ∞) using the selected density variant, to relative tolerance `tol`.
pub fn quad_ber<T: Real>(
    modulation: Modulation,
    snr: &SnrSpec<T>,
    p: &ChannelParams<T>,
    variant: PdfVariant,
    tol: T,
) -> Result<QuadratureResult<T>> {
    if !(tol.is_finite() && tol > T::zero()) {
        return Err(Error::Domain {
            func: "quad_ber",
            param: "tol",
            value: to_f64(tol),
            constraint: "tol > 0",
        });
    }
    check_variant(p, variant)?;
    let kernel = BerKernel::new(modulation)?;
    let gamma = snr.gamma_avg();
    integrate_semi_infinite_rel(
        move |i| {
            if i <= T::zero() {
                return T::zero();
            }
            let ber = kernel.eval(i, gamma);
            if ber == T::zero() {
                return T::zero();
            }
            combined_pdf_raw(i, p, variant) * ber
        },
        tol,
    )
}

/// One parameter point of the validation grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportInstance<T> {
    pub modulation: Modulation,
    pub paths_mn: u32,
    pub xi: T,
    pub a0: T,
    pub gamma_avg: T,
}

impl<T: Real> ReportInstance<T> {
    pub fn channel_params(&self) -> Result<ChannelParams<T>> {
        ChannelParams::new(self.paths_mn, self.xi, self.a0)
    }

    pub fn snr(&self) -> Result<SnrSpec<T>> {
        SnrSpec::from_linear(self.gamma_avg)
    }
}

/// Settings for [`discrepancy_report`].
#[derive(Debug, Clone, Copy)]
pub struct ReportConfig {
    /// Relative tolerance handed to the quadrature evaluations.
    pub quad_rel_tol: f64,
    /// When set, each instance also gets a Monte Carlo estimate.
    pub mc_samples: Option<u64>,
    pub seed: u64,
    pub chunks: usize,
}

impl Default for ReportConfig {
    fn default() -> Self {
        Self {
            quad_rel_tol: 1e-10,
            mc_samples: None,
            seed: 0,
            chunks: 1,
        }
    }
}

/// One row of the discrepancy report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportRow<T> {
    pub instance: ReportInstance<T>,
    /// Closed form used downstream (MPSK sum, or the exact DPSK form).
    pub ber_closed: T,
    /// The published DPSK closed form; `None` for MPSK instances.
    pub ber_published: Option<T>,
    /// Quadrature against the power-law density: (value, error bound).
    pub quad_power_law: (T, T),
    /// Quadrature against the exact density; `None` when ξ² ≥ MN.
    pub quad_exact: Option<(T, T)>,
    /// Monte Carlo estimate, when requested.
    pub mc: Option<McEstimate<T>>,
    /// |closed - quad_power_law| / quad_power_law.
    pub rel_gap_closed_vs_quad: T,
    /// |published - exact| / exact for DPSK instances.
    pub published_vs_exact_gap: Option<T>,
    /// Model gap: closed form over the exact-density BER.
    pub model_ratio: Option<T>,
    /// |mc - quad_exact| / std_error, when both are present.
    pub mc_sigma_gap: Option<T>,
}

/// Evaluate every route to the average BER on each instance and quantify
/// the gaps between them. Rows are emitted in instance order.
pub fn discrepancy_report<T: Real>(
    instances: &[ReportInstance<T>],
    cfg: &ReportConfig,
) -> Result<Vec<ReportRow<T>>> {
    let tol = real::<T>(cfg.quad_rel_tol);
    let mut rows = Vec::with_capacity(instances.len());
    for inst in instances {
        let p = inst.channel_params()?;
        let snr = inst.snr()?;
        let closed = ber_closed(inst.modulation, &snr, &p)?;
        let published = match inst.modulation {
            Modulation::Dpsk => Some(ber_dpsk_closed(&snr, &p, DpskForm::Published)?),
            Modulation::Mpsk { .. } => None,
        };
        let qp = quad_ber(inst.modulation, &snr, &p, PdfVariant::PowerLaw, tol)?;
        let exact_ok = p.xi_sq() < p.mn_real();
        let qe = if exact_ok {
            Some(quad_ber(inst.modulation, &snr, &p, PdfVariant::Exact, tol)?)
        } else {
            None
        };
        let mc = match cfg.mc_samples {
            Some(n) => Some(mc_ber_chunked(
                inst.modulation,
                &snr,
                &p,
                n,
                cfg.seed,
                cfg.chunks,
            )?),
            None => None,
        };

        let rel_gap_closed_vs_quad = ((closed - qp.value) / qp.value).abs();
        let published_vs_exact_gap = published.map(|pub_v| ((pub_v - closed) / closed).abs());
        let model_ratio = qe.as_ref().map(|q| closed / q.value);
        let mc_sigma_gap = match (&mc, &qe) {
            (Some(m), Some(q)) if m.std_error > T::zero() => {
                Some(((m.mean - q.value) / m.std_error).abs())
            }
            _ => None,
        };

        rows.push(ReportRow {
            instance: *inst,
            ber_closed: closed,
            ber_published: published,
            quad_power_law: (qp.value, qp.abs_error_estimate),
            quad_exact: qe.map(|q| (q.value, q.abs_error_estimate)),
            mc,
            rel_gap_closed_vs_quad,
            published_vs_exact_gap,
            model_ratio,
            mc_sigma_gap,
        });
    }
    Ok(rows)
}

/// The standard closed-form validation grid:
/// ξ² ∈ {0.5, 1, 2, 4} × MN ∈ {1, 4, 16, 36} (where ξ² < MN + 1) ×
/// γ_avg ∈ {1, 10, 100, 1000} × {BPSK, QPSK, 8PSK, DPSK}.
pub fn validation_grid<T: Real>() -> Vec<ReportInstance<T>> {
    let mut grid = Vec::new();
    for &modulation in &[
        Modulation::Mpsk { m: 2 },
        Modulation::Mpsk { m: 4 },
        Modulation::Mpsk { m: 8 },
        Modulation::Dpsk,
    ] {
        for &xi_sq in &[0.5_f64, 1.0, 2.0, 4.0] {
            for &mn in &[1u32, 4, 16, 36] {
                if xi_sq >= mn as f64 + 1.0 {
                    continue;
                }
                for &gamma in &[1.0_f64, 10.0, 100.0, 1000.0] {
                    grid.push(ReportInstance {
                        modulation,
                        paths_mn: mn,
                        xi: real::<T>(xi_sq.sqrt()),
                        a0: T::one(),
                        gamma_avg: real::<T>(gamma),
                    });
                }
            }
        }
    }
    grid
}

/// Deterministic randomized instances for Monte Carlo validation: ξ² < MN,
/// BER over the exact density at least `min_ber` so an n = 10⁶ estimate
/// resolves it.
pub fn randomized_mc_instances<T: Real>(
    seed: u64,
    count: usize,
    min_ber: f64,
) -> Vec<ReportInstance<T>> {
    let mods = [
        Modulation::Mpsk { m: 2 },
        Modulation::Mpsk { m: 4 },
        Modulation::Mpsk { m: 8 },
        Modulation::Dpsk,
    ];
    let mn_choices = [1u32, 2, 4, 9, 16, 36];
    let mut rng = CounterRng::new(seed, u64::MAX);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let modulation = mods[(rng.next_u64() % 4) as usize];
        let mn = mn_choices[(rng.next_u64() % 6) as usize];
        // ξ² uniform in (0.3, min(0.9 MN, 6))
        let hi = (0.9 * mn as f64).min(6.0);
        let xi_sq = 0.3 + (hi - 0.3) * rng.next_f64();
        if xi_sq >= mn as f64 {
            continue;
        }
        let a0 = 0.55 + 0.45 * rng.next_f64();
        let gamma = 10.0_f64.powf(2.0 * rng.next_f64());
        let inst = ReportInstance {
            modulation,
            paths_mn: mn,
            xi: real::<T>(xi_sq.sqrt()),
            a0: real::<T>(a0),
            gamma_avg: real::<T>(gamma),
        };
        let p = match inst.channel_params() {
            Ok(p) => p,
            Err(_) => continue,
        };
        let snr = inst.snr().expect("gamma positive");
        let quad = quad_ber(
            inst.modulation,
            &snr,
            &p,
            PdfVariant::Exact,
            real::<T>(1e-8),
        );
        match quad {
            Ok(q) if to_f64(q.value) >= min_ber => out.push(inst),
            _ => continue,
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn instance(
        modulation: Modulation,
        mn: u32,
        xi_sq: f64,
        a0: f64,
        gamma: f64,
    ) -> ReportInstance<f64> {
        ReportInstance {
            modulation,
            paths_mn: mn,
            xi: xi_sq.sqrt(),
            a0,
            gamma_avg: gamma,
        }
    }

    #[test]
    fn mc_is_bit_reproducible() {
        let p = ChannelParams::<f64>::new(4, 1.2, 0.8).unwrap();
        let s = SnrSpec::from_linear(10.0).unwrap();
        let a = mc_ber(Modulation::bpsk(), &s, &p, 40_000, 7).unwrap();
        let b = mc_ber(Modulation::bpsk(), &s, &p, 40_000, 7).unwrap();
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
        // a different seed moves the estimate
        let c = mc_ber(Modulation::bpsk(), &s, &p, 40_000, 8).unwrap();
        assert_ne!(a.mean.to_bits(), c.mean.to_bits());
    }

    #[test]
    fn chunked_runs_match_sequential_bitwise() {
        let p = ChannelParams::<f64>::new(2, 1.0, 1.0).unwrap();
        let s = SnrSpec::from_linear(5.0).unwrap();
        let expected = mc_ber_chunked(Modulation::Dpsk, &s, &p, 100_000, 3, 1).unwrap();
        for chunks in [4usize, 16] {
            let got = mc_ber_chunked(Modulation::Dpsk, &s, &p, 100_000, 3, chunks).unwrap();
            assert_eq!(
                expected.mean.to_bits(),
                got.mean.to_bits(),
                "chunks {chunks}"
            );
            assert_eq!(
                expected.std_error.to_bits(),
                got.std_error.to_bits(),
                "chunks {chunks}"
            );
        }
    }

    #[test]
    fn mc_rejects_zero_samples() {
        let p = ChannelParams::<f64>::new(2, 1.0, 1.0).unwrap();
        let s = SnrSpec::from_linear(5.0).unwrap();
        assert!(mc_ber(Modulation::Dpsk, &s, &p, 0, 1).is_err());
    }

    #[test]
    fn mc_matches_exact_quadrature() {
        // BPSK, MN = 2, ξ² = 1, A0 = 1, γ = 1 (the exact variant needs
        // ξ² < MN, which rules out the single-path ξ² = 1 point)
        let p = ChannelParams::<f64>::new(2, 1.0, 1.0).unwrap();
        let s = SnrSpec::from_linear(1.0).unwrap();
        let mc = mc_ber(Modulation::bpsk(), &s, &p, 1_000_000, 42).unwrap();
        let quad = quad_ber(Modulation::bpsk(), &s, &p, PdfVariant::Exact, 1e-10).unwrap();
        let gap = (mc.mean - quad.value).abs();
        assert!(
            gap <= 4.0 * mc.std_error,
            "mc {} vs quad {} (4σ = {})",
            mc.mean,
            quad.value,
            4.0 * mc.std_error
        );
    }

    #[test]
    fn mc_stays_nonnegative_at_extreme_snr() {
        let p = ChannelParams::<f64>::new(2, 1.0, 1.0).unwrap();
        let s = SnrSpec::from_linear(1e12).unwrap();
        let mc = mc_ber(Modulation::bpsk(), &s, &p, 10_000, 5).unwrap();
        assert!(mc.mean >= 0.0);
    }

    #[test]
    fn outage_limits() {
        let p = ChannelParams::<f64>::new(2, 1.0, 1.0).unwrap();
        let s = SnrSpec::from_linear(4.0).unwrap();
        // I > 0 almost surely, and the tiniest threshold catches nothing
        let never = mc_outage(1e-300, &s, &p, 50_000, 1).unwrap();
        assert_eq!(never.mean, 0.0);
        let always = mc_outage(1e12, &s, &p, 50_000, 1).unwrap();
        assert_eq!(always.mean, 1.0);
    }

    #[test]
    fn outage_formula_gap_is_quantified() {
        // MN = 2, ξ² = 1, A0 = 1, γ_th/γ_avg = 0.25: power-law value is 0.5
        let p = ChannelParams::<f64>::new(2, 1.0, 1.0).unwrap();
        let s = SnrSpec::from_linear(4.0).unwrap();
        let mc = mc_outage(1.0, &s, &p, 1_000_000, 9).unwrap();
        let power_law = crate::performance::outage_probability(1.0, &s, &p)
            .unwrap()
            .value;
        assert!((power_law - 0.5).abs() < 1e-12);
        let gap = (mc.mean - power_law).abs();
        // the power-law CDF is an approximation; the sampler follows the
        // exact law, so the gap is real and finite
        assert!(gap.is_finite());
        assert!(mc.mean > 0.0 && mc.mean < 1.0);
    }

    #[test]
    fn quad_power_law_matches_closed_forms() {
        let s = SnrSpec::from_linear(10.0).unwrap();
        let p = ChannelParams::<f64>::new(4, 1.3, 0.9).unwrap();
        for modulation in [Modulation::bpsk(), Modulation::Mpsk { m: 8 }] {
            let q = quad_ber(modulation, &s, &p, PdfVariant::PowerLaw, 1e-10).unwrap();
            let c = ber_closed(modulation, &s, &p).unwrap();
            assert!(((q.value - c) / c).abs() < 1e-8, "{modulation:?}");
        }
    }

    #[test]
    fn quad_power_law_matches_closed_form_near_the_gamma_pole() {
        // MN = 36, ξ = 5.5, A0 = 1, γ = 1: ξ² = 30.25 sits deep in the
        // regime the optimizer explores
        let s = SnrSpec::from_linear(1.0).unwrap();
        let p = ChannelParams::<f64>::new(36, 5.5, 1.0).unwrap();
        let q = quad_ber(Modulation::bpsk(), &s, &p, PdfVariant::PowerLaw, 1e-10).unwrap();
        let c = ber_closed(Modulation::bpsk(), &s, &p).unwrap();
        assert!(
            ((q.value - c) / c).abs() < 1e-8,
            "quad {} vs closed {c}",
            q.value
        );
    }

    #[test]
    fn exact_quadrature_reports_the_model_gap_at_high_diversity() {
        // BPSK, MN = 36, ξ = 5.5, A0 = 0.710144, γ = 100: the exact-density
        // BER is the ground truth; the power-law closed form overshoots and
        // the ratio is the model-gap metric
        let s = SnrSpec::from_linear(100.0).unwrap();
        let p = ChannelParams::<f64>::new(36, 5.5, 0.710144).unwrap();
        let q = quad_ber(Modulation::bpsk(), &s, &p, PdfVariant::Exact, 1e-9).unwrap();
        assert!(q.value > 0.0 && q.value < 0.5);
        let c = ber_closed(Modulation::bpsk(), &s, &p).unwrap();
        let ratio = c / q.value;
        assert!(ratio.is_finite() && ratio > 0.0, "model ratio {ratio}");
        println!("model-gap ratio at high diversity: {ratio:.6e}");
    }

    #[test]
    fn quad_adjudicates_dpsk_forms() {
        let s = SnrSpec::from_linear(10.0).unwrap();
        let p = ChannelParams::<f64>::new(3, 2.0_f64.sqrt(), 1.0).unwrap();
        let q = quad_ber(Modulation::Dpsk, &s, &p, PdfVariant::PowerLaw, 1e-10).unwrap();
        let exact_form = ber_dpsk_closed(&s, &p, DpskForm::Exact).unwrap();
        let published = ber_dpsk_closed(&s, &p, DpskForm::Published).unwrap();
        assert!(((q.value - exact_form) / exact_form).abs() < 1e-8);
        assert!(((q.value - published) / published).abs() > 1e-2);
    }

    #[test]
    fn report_shapes() {
        let empty = discrepancy_report::<f64>(&[], &ReportConfig::default()).unwrap();
        assert!(empty.is_empty());

        let rows = discrepancy_report(
            &[instance(Modulation::bpsk(), 4, 2.0, 0.710144, 100.0)],
            &ReportConfig {
                mc_samples: Some(20_000),
                ..ReportConfig::default()
            },
        )
        .unwrap();
        assert_eq!(rows.len(), 1);
        let row = &rows[0];
        assert!(row.rel_gap_closed_vs_quad.is_finite());
        assert!(row.quad_exact.is_some());
        assert!(row.model_ratio.unwrap().is_finite());
        assert!(row.mc_sigma_gap.unwrap().is_finite());
        assert!(row.ber_published.is_none());
    }

    #[test]
    fn validation_grid_has_expected_size() {
        let grid = validation_grid::<f64>();
        // (4 + 4 + 3 + 3) ξ²×MN combinations × 4 γ × 4 modulations
        assert_eq!(grid.len(), 14 * 4 * 4);
        for inst in &grid {
            assert!(inst.channel_params().is_ok());
        }
    }

    #[test]
    fn randomized_instances_are_deterministic_and_feasible() {
        let a = randomized_mc_instances::<f64>(2026, 5, 1e-5);
        let b = randomized_mc_instances::<f64>(2026, 5, 1e-5);
        assert_eq!(a.len(), 5);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.xi.to_bits(), y.xi.to_bits());
            assert_eq!(x.modulation, y.modulation);
        }
        for inst in &a {
            let p = inst.channel_params().unwrap();
            assert!(p.xi_sq() < p.paths_mn() as f64);
        }
    }
}
