//! `radar-dse`: simulate the OFDM radar pipeline on approximate operators,
//! sweep accuracy over SNR, characterise operator error and explore the
//! accuracy/cost trade-off.

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use error::CliError;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "RADAR_DSE_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "radar-dse", version, about = "Approximate-arithmetic OFDM radar simulator and design-space explorer")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Default)]
pub struct Common {
    /// Run configuration file (key = value lines)
    #[arg(long, short = 'c', value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Write the artifact here instead of stdout
    #[arg(long, short = 'o', value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Directory for artifacts under their default file names. Falls back to
    /// the config's output_dir, then to $RADAR_DSE_OUT_DIR, then to stdout
    #[arg(long, value_name = "DIR")]
    pub output_dir: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the pipeline once and print the range estimate as JSON
    Simulate(SimulateArgs),
    /// Run the pipeline once and emit the range profile as CSV
    Profile(SimulateArgs),
    /// Monte Carlo accuracy sweep over pairs and SNR, as CSV
    Sweep(SweepArgs),
    /// Error metrics of operator models, as CSV
    Metrics(MetricsArgs),
    /// Join accuracy with costs, filter by constraints and mark the Pareto front, as JSON
    Pareto(ParetoArgs),
    /// Resilience probe: deviation under injected block noise, as CSV
    Probe(ProbeArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: Common,
    /// Operator pair, e.g. acc+acc or loa4+tmul6 [default: first configured pair]
    #[arg(long)]
    pub pair: Option<String>,
    /// SNR in dB; `inf` for a noiseless run
    #[arg(long, default_value = "inf", allow_hyphen_values = true)]
    pub snr: String,
    /// Run seed [default: config seed]
    #[arg(long)]
    pub seed: Option<u64>,
    /// zeropad_average or flattened [default: config value]
    #[arg(long)]
    pub estimator_mode: Option<String>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: Common,
    /// Operator pair; repeat for several [default: config pairs]
    #[arg(long = "pair")]
    pub pairs: Vec<String>,
    /// SNR grid as start,stop,step in dB [default: config grid]
    #[arg(long, allow_hyphen_values = true)]
    pub snr_grid: Option<String>,
    /// Monte Carlo runs per pair and SNR [default: config runs]
    #[arg(long)]
    pub runs: Option<usize>,
    /// Base seed [default: config seed]
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    #[command(flatten)]
    pub common: Common,
    /// Operator model (acc, loaK, traK, bcpB, tmulK, pppR or a fixture name);
    /// prefix `add:` or `mul:` to pick the operator for `acc`
    #[arg(long = "model", required = true)]
    pub models: Vec<String>,
    /// Operand width in bits: 4, 8 or 16
    #[arg(long, default_value_t = 16)]
    pub width: u32,
    /// auto, exhaustive or sampled; auto is exhaustive up to 8 bits
    #[arg(long, default_value = "auto")]
    pub mode: String,
    /// Sample count in sampled mode
    #[arg(long, default_value_t = radar_dse::errstat::DEFAULT_SAMPLES)]
    pub samples: u64,
    /// Sampling seed [default: config seed]
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ParetoArgs {
    #[command(flatten)]
    pub common: Common,
    /// Cost table CSV [default: config cost_table, else the bundled fixture]
    #[arg(long)]
    pub cost: Option<PathBuf>,
    /// Accuracy CSV from `sweep` [default: the bundled fixture]
    #[arg(long)]
    pub accuracy: Option<PathBuf>,
    /// Keep pairs with power strictly below this (mW)
    #[arg(long)]
    pub max_power: Option<f64>,
    /// Keep pairs with area strictly below this (mm^2)
    #[arg(long)]
    pub max_area: Option<f64>,
    /// Keep pairs with mean deviation strictly below this (m)
    #[arg(long)]
    pub max_dev: Option<f64>,
    /// Lowest SNR (dB) included in the deviation average
    #[arg(long, allow_hyphen_values = true)]
    pub snr_min: Option<f64>,
    /// Highest SNR (dB) included in the deviation average
    #[arg(long, allow_hyphen_values = true)]
    pub snr_max: Option<f64>,
    /// Average deviation over strictly positive SNRs only
    #[arg(long, conflicts_with_all = ["snr_min", "snr_max"])]
    pub positive_snr: bool,
    /// Emit every design point, not only those passing the constraints
    #[arg(long)]
    pub all: bool,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    #[command(flatten)]
    pub common: Common,
    /// Injection point: estimator_input or division_input
    #[arg(long, default_value = "estimator_input")]
    pub block: String,
    /// Noise standard deviation; repeat for several [default: 0, 0.05, 0.2, 0.5]
    #[arg(long = "sigma")]
    pub sigmas: Vec<f64>,
    /// Runs per sigma [default: config runs]
    #[arg(long)]
    pub runs: Option<usize>,
    /// Base seed [default: config seed]
    #[arg(long)]
    pub seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            report(&CliError::Usage {
                message: e.kind().to_string(),
            });
            return ExitCode::from(2);
        }
    };
    match commands::dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            report(&e);
            ExitCode::FAILURE
        }
    }
}

fn report(e: &CliError) {
    let line = serde_json::to_string(&e.to_line()).unwrap_or_else(|_| format!("{{\"error\":\"{}\"}}", e.kind()));
    eprintln!("{line}");
}
