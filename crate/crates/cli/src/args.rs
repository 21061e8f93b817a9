use std::f64::consts::PI;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

#[derive(Debug, Parser)]
#[command(
    name = "spinstar",
    version,
    about = "Spin-star Heisenberg dynamics, entanglement and W-state detection"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample quantities along a trajectory and write a time series.
    Evolve(EvolveArgs),
    /// Detect TWS, pseudo-W, peak, crossing and disentangling instants.
    Events(EventsArgs),
    /// Check every closed form and invariant against the numeric pipeline.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScenarioArg {
    Cops,
    Lops,
    CustomAmplitudes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Number of ligands L (overrides --config).
    #[arg(long)]
    pub ligands: Option<usize>,
    /// Exchange coupling J (overrides --config).
    #[arg(long, allow_negative_numbers = true)]
    pub coupling: Option<f64>,
    /// key=value file with `ligand_count` and `coupling`.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct TrajectoryArgs {
    #[arg(long, value_enum, default_value = "cops")]
    pub scenario: ScenarioArg,
    /// Initially excited ligand for `lops` (1-based; defaults to the last one).
    #[arg(long)]
    pub excited_ligand: Option<usize>,
    /// Comma-separated one-particle amplitudes for `custom-amplitudes`, e.g. `0.5,-0.5,0.5i,-0.5`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_complex)]
    pub amps: Option<Vec<Complex64>>,
    #[arg(long, default_value_t = 4.0 * PI)]
    pub tmax: f64,
    #[arg(long, default_value_t = 4001)]
    pub steps: usize,
    /// Output file; standard output when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub trajectory: TrajectoryArgs,
    /// Comma-separated quantity names; defaults to the scenario's concurrences.
    #[arg(long, value_delimiter = ',')]
    pub quantities: Vec<String>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Also write `<output>.gp`, a gnuplot script plotting the CSV.
    #[arg(long)]
    pub gnuplot: bool,
}

#[derive(Debug, Clone, Args)]
pub struct EventsArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub trajectory: TrajectoryArgs,
    /// Detectors to run (comma-separated): tws, pstws, peaks, crossings, disentangle.
    #[arg(long, value_delimiter = ',', default_value = "tws")]
    pub detector: Vec<String>,
    /// Spread below which a W state counts as exact.
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Max deviation allowed for closed-form checks.
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long, default_value_t = 4001)]
    pub steps: usize,
    /// Also run the brute-force full-space and concurrence oracles.
    #[arg(long)]
    pub deep: bool,
    /// Seed for the random concurrence oracle (reported with its row).
    #[arg(long)]
    pub seed: Option<u64>,
}

pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    Complex64::from_str(s.trim()).map_err(|_| format!("invalid complex number `{s}`"))
}
