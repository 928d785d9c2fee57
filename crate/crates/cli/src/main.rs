//! Command-line surface: CSV curve and surface data, optimization answers,
//! and the validation report.
//!
//! Exit codes: 0 success, 1 validation gate failure, 2 usage or domain
//! error (with a one-line diagnostic on stderr).

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fso_mimo::Modulation;
use fso_mimo_cli::commands::{
    BerCurveArgs, OptimizeArgs, OptimizeMode, OracleKind, SurfaceArgs, SurfaceMetric, ValidateArgs,
};

#[derive(Parser)]
#[command(
    name = "fso-mimo",
    version,
    about = "BER, outage, and beam-width optimization for FSO MIMO links \
             under saturated turbulence with pointing error"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// BER versus average SNR at fixed channel parameters
    BerCurve(BerCurveCli),
    /// BER or outage over a (snr, xi) grid in long format
    Surface(SurfaceCli),
    /// Find the BER-minimizing xi or physical beam width
    Optimize(OptimizeCli),
    /// Run the closed-form and Monte Carlo validation report
    Validate(ValidateCli),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModulationArg {
    Bpsk,
    Qpsk,
    #[value(name = "8psk")]
    Psk8,
    Dpsk,
}

impl From<ModulationArg> for Modulation {
    fn from(m: ModulationArg) -> Self {
        match m {
            ModulationArg::Bpsk => Modulation::Mpsk { m: 2 },
            ModulationArg::Qpsk => Modulation::Mpsk { m: 4 },
            ModulationArg::Psk8 => Modulation::Mpsk { m: 8 },
            ModulationArg::Dpsk => Modulation::Dpsk,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OracleArg {
    None,
    Quad,
    Mc,
}

#[derive(Args)]
struct MimoFlags {
    /// Receive aperture count
    #[arg(long, default_value_t = 1)]
    m: u32,
    /// Transmit aperture count
    #[arg(long, default_value_t = 1)]
    n: u32,
}

impl MimoFlags {
    fn paths(&self) -> u32 {
        self.m.saturating_mul(self.n)
    }
}

#[derive(Args)]
struct BerCurveCli {
    #[arg(long, value_enum)]
    modulation: ModulationArg,
    #[command(flatten)]
    mimo: MimoFlags,
    /// Pointing ratio ξ
    #[arg(long)]
    xi: f64,
    /// Collected-power fraction at zero displacement
    #[arg(long, default_value_t = 1.0)]
    a0: f64,
    #[arg(long)]
    snr_db_start: f64,
    #[arg(long)]
    snr_db_stop: f64,
    #[arg(long)]
    snr_db_step: f64,
    /// Independent estimate column: quadrature (exact density) or Monte Carlo
    #[arg(long, value_enum, default_value_t = OracleArg::None)]
    oracle: OracleArg,
    /// Monte Carlo sample count (oracle = mc)
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MetricArg {
    Ber,
    Outage,
}

#[derive(Args)]
struct SurfaceCli {
    #[arg(long, value_enum)]
    metric: MetricArg,
    #[arg(long, value_enum, default_value_t = ModulationArg::Bpsk)]
    modulation: ModulationArg,
    #[command(flatten)]
    mimo: MimoFlags,
    #[arg(long, default_value_t = 1.0)]
    a0: f64,
    #[arg(long)]
    xi_start: f64,
    #[arg(long)]
    xi_stop: f64,
    #[arg(long)]
    xi_step: f64,
    #[arg(long)]
    snr_db_start: f64,
    #[arg(long)]
    snr_db_stop: f64,
    #[arg(long)]
    snr_db_step: f64,
    /// Threshold SNR in dB (outage metric only)
    #[arg(long)]
    gamma_th_db: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Xi,
    Beam,
}

#[derive(Args)]
struct OptimizeCli {
    #[arg(long, value_enum)]
    mode: ModeArg,
    #[arg(long, value_enum)]
    modulation: ModulationArg,
    #[command(flatten)]
    mimo: MimoFlags,
    /// Average SNR in dB
    #[arg(long)]
    snr_db: f64,
    /// Collected-power fraction (xi mode)
    #[arg(long, default_value_t = 1.0)]
    a0: f64,
    /// Aperture radius in meters (beam mode)
    #[arg(long)]
    r: Option<f64>,
    /// Jitter standard deviation in meters (beam mode)
    #[arg(long)]
    sigma_s: Option<f64>,
    /// Beam-waist bracket in meters (beam mode)
    #[arg(long)]
    wz_lo: Option<f64>,
    #[arg(long)]
    wz_hi: Option<f64>,
    /// Also emit the result as a CSV table
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct ValidateCli {
    /// Monte Carlo samples per instance
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Gate on the closed-form vs quadrature relative gap
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Worker chunks for the Monte Carlo estimators
    #[arg(long, default_value_t = 1)]
    chunks: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> fso_mimo::Result<ExitCode> {
    match cli.command {
        Command::BerCurve(args) => {
            let table = fso_mimo_cli::commands::ber_curve(&BerCurveArgs {
                modulation: args.modulation.into(),
                paths_mn: args.mimo.paths(),
                xi: args.xi,
                a0: args.a0,
                snr_db_start: args.snr_db_start,
                snr_db_stop: args.snr_db_stop,
                snr_db_step: args.snr_db_step,
                oracle: match args.oracle {
                    OracleArg::None => OracleKind::None,
                    OracleArg::Quad => OracleKind::Quad,
                    OracleArg::Mc => OracleKind::Mc,
                },
                samples: args.samples,
                seed: args.seed,
            })?;
            print!("{}", table.render());
            Ok(ExitCode::SUCCESS)
        }
        Command::Surface(args) => {
            let table = fso_mimo_cli::commands::surface(&SurfaceArgs {
                metric: match args.metric {
                    MetricArg::Ber => SurfaceMetric::Ber,
                    MetricArg::Outage => SurfaceMetric::Outage,
                },
                modulation: args.modulation.into(),
                paths_mn: args.mimo.paths(),
                a0: args.a0,
                xi_start: args.xi_start,
                xi_stop: args.xi_stop,
                xi_step: args.xi_step,
                snr_db_start: args.snr_db_start,
                snr_db_stop: args.snr_db_stop,
                snr_db_step: args.snr_db_step,
                gamma_th_db: args.gamma_th_db,
            })?;
            print!("{}", table.render());
            Ok(ExitCode::SUCCESS)
        }
        Command::Optimize(args) => {
            let out = fso_mimo_cli::commands::optimize(&OptimizeArgs {
                mode: match args.mode {
                    ModeArg::Xi => OptimizeMode::Xi,
                    ModeArg::Beam => OptimizeMode::Beam,
                },
                modulation: args.modulation.into(),
                paths_mn: args.mimo.paths(),
                snr_db: args.snr_db,
                a0: args.a0,
                r: args.r,
                sigma_s: args.sigma_s,
                wz_lo: args.wz_lo,
                wz_hi: args.wz_hi,
                csv: args.csv,
            })?;
            print!("{}", out.summary);
            if let Some(table) = out.csv {
                println!();
                print!("{}", table.render());
            }
            if let Some(warning) = out.warning {
                eprintln!("warning: {warning}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate(args) => {
            let (table, all_pass) = fso_mimo_cli::commands::validate(&ValidateArgs {
                samples: args.samples,
                seed: args.seed,
                tol: args.tol,
                chunks: args.chunks,
                mc_instances: 10,
            })?;
            print!("{}", table.render());
            Ok(if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}
