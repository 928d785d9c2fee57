//! Command implementations, decoupled from argument parsing so they can be
//! driven directly by tests.

use fso_mimo::channel::PdfVariant;
use fso_mimo::oracle::{
    discrepancy_report, mc_ber_chunked, quad_ber, randomized_mc_instances, validation_grid,
    ReportConfig, ReportRow,
};
use fso_mimo::performance::{ber_closed, outage_probability};
use fso_mimo::{
    optimizer, BerEstimate, BerProvenance, ChannelParams, Error, Modulation, OptMethod, Result,
    SnrSpec,
};

use crate::csv::{sci12, CsvTable};

/// Inclusive grid start..=stop with the given positive step.
// negated comparisons catch NaN endpoints
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn inclusive_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Domain {
            func: "grid",
            param: "step",
            value: step,
            constraint: "step > 0",
        });
    }
    if !(stop >= start) {
        return Err(Error::Domain {
            func: "grid",
            param: "stop",
            value: stop,
            constraint: "stop >= start",
        });
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|k| start + step * k as f64).collect())
}

fn mpsk_m_code(modulation: Modulation) -> f64 {
    match modulation {
        Modulation::Mpsk { m } => m as f64,
        Modulation::Dpsk => 0.0,
    }
}

/// Which independent estimate to place next to the closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleKind {
    None,
    /// Quadrature over the exact conditioning density (requires ξ² < MN).
    Quad,
    /// Deterministic Monte Carlo over the exact samplers.
    Mc,
}

pub struct BerCurveArgs {
    pub modulation: Modulation,
    pub paths_mn: u32,
    pub xi: f64,
    pub a0: f64,
    pub snr_db_start: f64,
    pub snr_db_stop: f64,
    pub snr_db_step: f64,
    pub oracle: OracleKind,
    pub samples: u64,
    pub seed: u64,
}

/// BER versus average SNR at fixed channel parameters.
pub fn ber_curve(args: &BerCurveArgs) -> Result<CsvTable> {
    let p = ChannelParams::new(args.paths_mn, args.xi, args.a0)?;
    let grid = inclusive_grid(args.snr_db_start, args.snr_db_stop, args.snr_db_step)?;
    let mut table = match args.oracle {
        OracleKind::None => CsvTable::new(&["snr_db", "ber_closed"]),
        _ => CsvTable::new(&["snr_db", "ber_closed", "ber_oracle", "oracle_stderr"]),
    };
    for &db in &grid {
        let snr = SnrSpec::from_db(db)?;
        let closed = ber_closed(args.modulation, &snr, &p)?;
        let oracle: Option<BerEstimate<f64>> = match args.oracle {
            OracleKind::None => None,
            OracleKind::Quad => {
                let q = quad_ber(args.modulation, &snr, &p, PdfVariant::Exact, 1e-10)?;
                Some(BerEstimate {
                    value: q.value,
                    provenance: BerProvenance::Quadrature {
                        abs_error: q.abs_error_estimate,
                    },
                })
            }
            OracleKind::Mc => {
                let mc = mc_ber_chunked(args.modulation, &snr, &p, args.samples, args.seed, 1)?;
                Some(BerEstimate {
                    value: mc.mean,
                    provenance: BerProvenance::MonteCarlo {
                        std_error: mc.std_error,
                    },
                })
            }
        };
        match oracle {
            None => table.push(vec![db, closed]),
            Some(est) => {
                let spread = match est.provenance {
                    BerProvenance::Quadrature { abs_error } => abs_error,
                    BerProvenance::MonteCarlo { std_error } => std_error,
                    _ => f64::NAN,
                };
                table.push(vec![db, closed, est.value, spread]);
            }
        }
    }
    Ok(table)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfaceMetric {
    Ber,
    Outage,
}

pub struct SurfaceArgs {
    pub metric: SurfaceMetric,
    pub modulation: Modulation,
    pub paths_mn: u32,
    pub a0: f64,
    pub xi_start: f64,
    pub xi_stop: f64,
    pub xi_step: f64,
    pub snr_db_start: f64,
    pub snr_db_stop: f64,
    pub snr_db_step: f64,
    pub gamma_th_db: Option<f64>,
}

/// Long-format surface over (snr_db, xi): one value per row, outer loop SNR
/// ascending, inner loop ξ ascending.
pub fn surface(args: &SurfaceArgs) -> Result<CsvTable> {
    let snr_grid = inclusive_grid(args.snr_db_start, args.snr_db_stop, args.snr_db_step)?;
    let xi_grid = inclusive_grid(args.xi_start, args.xi_stop, args.xi_step)?;
    let gamma_th = match (args.metric, args.gamma_th_db) {
        (SurfaceMetric::Outage, Some(db)) => Some(10f64.powf(db / 10.0)),
        (SurfaceMetric::Outage, None) => {
            return Err(Error::Infeasible {
                func: "surface",
                what: "--gamma-th-db is required for the outage metric".to_string(),
            })
        }
        (SurfaceMetric::Ber, _) => None,
    };
    let mut table = CsvTable::new(&["snr_db", "xi", "value"]);
    for &db in &snr_grid {
        let snr = SnrSpec::from_db(db)?;
        for &xi in &xi_grid {
            let p = ChannelParams::new(args.paths_mn, xi, args.a0)?;
            let value = match args.metric {
                SurfaceMetric::Ber => ber_closed(args.modulation, &snr, &p)?,
                SurfaceMetric::Outage => {
                    outage_probability(gamma_th.expect("checked above"), &snr, &p)?.value
                }
            };
            table.push(vec![db, xi, value]);
        }
    }
    Ok(table)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptimizeMode {
    Xi,
    Beam,
}

pub struct OptimizeArgs {
    pub mode: OptimizeMode,
    pub modulation: Modulation,
    pub paths_mn: u32,
    pub snr_db: f64,
    pub a0: f64,
    pub r: Option<f64>,
    pub sigma_s: Option<f64>,
    pub wz_lo: Option<f64>,
    pub wz_hi: Option<f64>,
    pub csv: bool,
}

pub struct OptimizeOutput {
    pub summary: String,
    pub csv: Option<CsvTable>,
    pub warning: Option<String>,
}

fn method_name(method: OptMethod) -> &'static str {
    match method {
        OptMethod::StationarityRoot => "stationarity-root",
        OptMethod::GoldenSection => "golden-section",
    }
}

/// Minimize BER over ξ (formula-level, A₀ frozen) or over the physical
/// beam waist (ξ and A₀ coupled through the geometry).
pub fn optimize(args: &OptimizeArgs) -> Result<OptimizeOutput> {
    let snr = SnrSpec::from_db(args.snr_db)?;
    match args.mode {
        OptimizeMode::Xi => {
            let opt = optimizer::optimize_xi(args.modulation, &snr, args.paths_mn, args.a0)?;
            let summary = format!(
                "xi_star = {}\nber_at_optimum = {}\nmethod = {}\nderivative_residual = {}\niterations = {}\n",
                sci12(opt.xi_star),
                sci12(opt.ber_at_optimum),
                method_name(opt.method),
                sci12(opt.derivative_residual),
                opt.iterations
            );
            let csv = args.csv.then(|| {
                let mut t = CsvTable::new(&[
                    "xi_star",
                    "ber_at_optimum",
                    "derivative_residual",
                    "iterations",
                ]);
                t.push(vec![
                    opt.xi_star,
                    opt.ber_at_optimum,
                    opt.derivative_residual,
                    opt.iterations as f64,
                ]);
                t
            });
            Ok(OptimizeOutput {
                summary,
                csv,
                warning: None,
            })
        }
        OptimizeMode::Beam => {
            let missing = |param: &'static str| Error::Domain {
                func: "optimize",
                param,
                value: f64::NAN,
                constraint: "required in beam mode",
            };
            let r = args.r.ok_or_else(|| missing("r"))?;
            let sigma_s = args.sigma_s.ok_or_else(|| missing("sigma_s"))?;
            let lo = args.wz_lo.ok_or_else(|| missing("wz_lo"))?;
            let hi = args.wz_hi.ok_or_else(|| missing("wz_hi"))?;
            let opt = optimizer::optimize_beam_width(
                args.modulation,
                &snr,
                args.paths_mn,
                r,
                sigma_s,
                (lo, hi),
            )?;
            let summary = format!(
                "wz_star = {}\nxi_star = {}\na0_at_star = {}\nber_at_optimum = {}\nmethod = {}\nderivative_residual = nan\niterations = {}\n",
                sci12(opt.wz_star),
                sci12(opt.xi_star),
                sci12(opt.a0_at_star),
                sci12(opt.ber),
                method_name(OptMethod::GoldenSection),
                opt.iterations
            );
            let margin = 1e-6 * (hi - lo);
            let warning = (opt.wz_star - lo < margin || hi - opt.wz_star < margin).then(|| {
                format!(
                    "optimum wz_star = {} sits on the bracket boundary; widen (--wz-lo, --wz-hi)",
                    sci12(opt.wz_star)
                )
            });
            let csv = args.csv.then(|| {
                let mut t = CsvTable::new(&[
                    "wz_star",
                    "xi_star",
                    "a0_at_star",
                    "ber_at_optimum",
                    "iterations",
                ]);
                t.push(vec![
                    opt.wz_star,
                    opt.xi_star,
                    opt.a0_at_star,
                    opt.ber,
                    opt.iterations as f64,
                ]);
                t
            });
            Ok(OptimizeOutput {
                summary,
                csv,
                warning,
            })
        }
    }
}

pub struct ValidateArgs {
    pub samples: u64,
    pub seed: u64,
    pub tol: f64,
    pub chunks: usize,
    pub mc_instances: usize,
}

impl Default for ValidateArgs {
    fn default() -> Self {
        Self {
            samples: 1_000_000,
            seed: 0,
            tol: 1e-8,
            chunks: 1,
            mc_instances: 10,
        }
    }
}

pub const VALIDATE_HEADER: [&str; 18] = [
    "mpsk_m",
    "paths_mn",
    "xi",
    "a0",
    "gamma_avg",
    "ber_closed",
    "ber_published",
    "quad_power_law",
    "quad_power_law_err",
    "quad_exact",
    "quad_exact_err",
    "mc_mean",
    "mc_stderr",
    "rel_gap_closed_vs_quad",
    "published_vs_exact_gap",
    "model_ratio",
    "mc_sigma_gap",
    "gate_pass",
];

fn opt(v: Option<f64>) -> f64 {
    v.unwrap_or(f64::NAN)
}

fn report_row_cells(row: &ReportRow<f64>, gate_pass: bool) -> Vec<f64> {
    vec![
        mpsk_m_code(row.instance.modulation),
        row.instance.paths_mn as f64,
        row.instance.xi,
        row.instance.a0,
        row.instance.gamma_avg,
        row.ber_closed,
        opt(row.ber_published),
        row.quad_power_law.0,
        row.quad_power_law.1,
        opt(row.quad_exact.map(|q| q.0)),
        opt(row.quad_exact.map(|q| q.1)),
        opt(row.mc.map(|m| m.mean)),
        opt(row.mc.map(|m| m.std_error)),
        row.rel_gap_closed_vs_quad,
        opt(row.published_vs_exact_gap),
        opt(row.model_ratio),
        opt(row.mc_sigma_gap),
        if gate_pass { 1.0 } else { 0.0 },
    ]
}

/// Run the full validation grid plus Monte Carlo spot checks.
///
/// Gates: every closed-form-vs-quadrature(power-law) gap must stay within
/// `tol`, and every Monte Carlo estimate within 4 standard errors of the
/// exact-density quadrature. Model-gap columns are informational only.
pub fn validate(args: &ValidateArgs) -> Result<(CsvTable, bool)> {
    let grid = validation_grid::<f64>();
    let grid_rows = discrepancy_report(
        &grid,
        &ReportConfig {
            quad_rel_tol: 1e-10,
            mc_samples: None,
            seed: args.seed,
            chunks: args.chunks,
        },
    )?;
    let mc_instances = randomized_mc_instances::<f64>(args.seed, args.mc_instances, 1e-5);
    let mc_rows = discrepancy_report(
        &mc_instances,
        &ReportConfig {
            quad_rel_tol: 1e-10,
            mc_samples: Some(args.samples),
            seed: args.seed,
            chunks: args.chunks,
        },
    )?;

    let mut table = CsvTable::new(&VALIDATE_HEADER);
    let mut all_pass = true;
    for row in grid_rows.iter().chain(mc_rows.iter()) {
        let closed_ok = row.rel_gap_closed_vs_quad <= args.tol;
        let mc_ok = row.mc_sigma_gap.is_none_or(|g| g <= 4.0);
        let pass = closed_ok && mc_ok;
        all_pass &= pass;
        table.push(report_row_cells(row, pass));
    }
    Ok((table, all_pass))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_counts() {
        assert_eq!(inclusive_grid(0.0, 30.0, 5.0).unwrap().len(), 7);
        assert_eq!(inclusive_grid(1.0, 6.0, 0.1).unwrap().len(), 51);
        assert_eq!(inclusive_grid(2.0, 2.0, 1.0).unwrap(), vec![2.0]);
        assert!(inclusive_grid(0.0, 10.0, 0.0).is_err());
        assert!(inclusive_grid(10.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn ber_curve_reference_row() {
        // the 1/(2√π) case: M = N = 1, ξ = 1, A0 = 1, 0 dB
        let table = ber_curve(&BerCurveArgs {
            modulation: Modulation::bpsk(),
            paths_mn: 1,
            xi: 1.0,
            a0: 1.0,
            snr_db_start: 0.0,
            snr_db_stop: 0.0,
            snr_db_step: 5.0,
            oracle: OracleKind::None,
            samples: 0,
            seed: 0,
        })
        .unwrap();
        assert_eq!(table.rows.len(), 1);
        assert_eq!(sci12(table.rows[0][1]), "2.82094791774e-01");
    }

    #[test]
    fn surface_row_count_and_order() {
        let table = surface(&SurfaceArgs {
            metric: SurfaceMetric::Ber,
            modulation: Modulation::bpsk(),
            paths_mn: 4,
            a0: 1.0,
            xi_start: 1.0,
            xi_stop: 1.6,
            xi_step: 0.2,
            snr_db_start: 0.0,
            snr_db_stop: 10.0,
            snr_db_step: 5.0,
            gamma_th_db: None,
        })
        .unwrap();
        assert_eq!(table.rows.len(), 12);
        // outer snr ascending, inner xi ascending
        assert_eq!(table.rows[0][0], 0.0);
        assert!((table.rows[0][1] - 1.0).abs() < 1e-12);
        assert!((table.rows[3][1] - 1.6).abs() < 1e-12);
        assert_eq!(table.rows[4][0], 5.0);
    }

    #[test]
    fn outage_surface_requires_threshold() {
        let mut args = SurfaceArgs {
            metric: SurfaceMetric::Outage,
            modulation: Modulation::bpsk(),
            paths_mn: 2,
            a0: 1.0,
            xi_start: 1.0,
            xi_stop: 1.0,
            xi_step: 1.0,
            snr_db_start: 0.0,
            snr_db_stop: 0.0,
            snr_db_step: 1.0,
            gamma_th_db: None,
        };
        assert!(surface(&args).is_err());
        args.gamma_th_db = Some(0.0);
        let table = surface(&args).unwrap();
        // γ_th = γ_avg, MN = 2, ξ = 1, A0 = 1 → 1.0
        assert!((table.rows[0][2] - 1.0).abs() < 1e-12);
    }
}
