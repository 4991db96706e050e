use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use plc_tdr::metrics::{Convention, ZeroCrossing};
use plc_tdr::pulses::Family;
use plc_tdr::scenarios::RegulatoryBand;

#[derive(Debug, Parser)]
#[command(
    name = "plc-tdr",
    version,
    about = "Reflectometry pulses and fault location on power lines"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output directory. Without it the main document goes to stdout.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,

    /// Layout of single-record documents (pulse, metrics, fault, oracle).
    #[arg(long, global = true, value_enum, default_value_t = Format::Kv)]
    pub format: Format,

    /// Seed for HS-OFDM symbols and noise; recorded in every header.
    #[arg(long, global = true, default_value_t = plc_tdr::pulses::DEFAULT_SYMBOL_SEED)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Kv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pulse parameters and sampled waveform.
    Pulse(PulseArgs),
    /// Closed-form autocorrelation, optionally checked against brute force.
    Acf(AcfArgs),
    /// Resolution, compression and sidelobe metrics of one pulse.
    Metrics(MetricsArgs),
    /// Normal and faulted acquisitions of a topology and the located fault.
    Simulate(SimulateArgs),
    /// Prints the built-in demo topology as JSON.
    Topology(DemoArgs),
    /// Recomputes the reference tables and scores every cell.
    Tables(TablesArgs),
    /// Duration, resolution and range across a bandwidth span.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Args)]
pub struct PulseArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: Family,

    /// Regulatory band fixing the occupied bandwidth (defaults to FCC).
    #[arg(long, value_parser = parse_band)]
    pub band: Option<RegulatoryBand>,

    /// HS-OFDM subcarriers.
    #[arg(long, default_value_t = 512)]
    pub n: usize,

    /// Gaussian width in seconds (UWB).
    #[arg(long)]
    pub sigma: Option<f64>,

    /// Chirp rate in Hz/s (CSS, needs --t).
    #[arg(long)]
    pub mu: Option<f64>,

    /// Duration in seconds.
    #[arg(long)]
    pub t: Option<f64>,

    /// Pulse energy.
    #[arg(long, default_value_t = 1.0)]
    pub energy: f64,

    /// Sample rate in Hz (defaults to 8x the Nyquist rate).
    #[arg(long)]
    pub fs: Option<f64>,
}

#[derive(Debug, Args)]
pub struct AcfArgs {
    #[command(flatten)]
    pub pulse: PulseArgs,

    /// Lags across the support.
    #[arg(long, default_value_t = 4001)]
    pub points: usize,

    /// Also compare the closed form with brute-force correlation.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    #[command(flatten)]
    pub pulse: PulseArgs,

    /// Cable preset giving the phase velocity (lv, mv).
    #[arg(long, default_value = "lv")]
    pub cable: String,

    /// Phase velocity override in m/s.
    #[arg(long)]
    pub v_p: Option<f64>,

    #[arg(long, value_parser = parse_convention, default_value = "half")]
    pub convention: Convention,

    #[arg(long, value_parser = parse_zero_crossing, default_value = "nominal")]
    pub zero_crossing: ZeroCrossing,

    /// Repetition interval in seconds; reports the unambiguous range.
    #[arg(long, conflicts_with = "d_max")]
    pub delta_tp: Option<f64>,

    /// Range to cover in metres; reports the repetition interval.
    #[arg(long)]
    pub d_max: Option<f64>,

    /// Skip PSLR and ISLR.
    #[arg(long)]
    pub no_sidelobes: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub pulse: PulseArgs,

    /// Topology JSON file (defaults to the demo line).
    #[arg(long, value_name = "FILE")]
    pub topology: Option<PathBuf>,

    #[command(flatten)]
    pub demo: DemoArgs,

    /// Cable preset whose phase velocity sets the distance axis.
    #[arg(long, default_value = "lv")]
    pub cable: String,

    /// Signal-to-noise ratio in dB (absent or `inf` for a clean run).
    #[arg(long)]
    pub snr_db: Option<f64>,

    /// Detection threshold as a fraction of the largest differential peak.
    #[arg(long, default_value_t = 0.7)]
    pub threshold: f64,

    /// Frequency points of the channel grid (defaults to a size that covers
    /// every echo).
    #[arg(long)]
    pub grid_points: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct DemoArgs {
    /// Demo line length in metres.
    #[arg(long, default_value_t = 1000.0)]
    pub length_m: f64,

    /// Demo fault distance in metres.
    #[arg(long, default_value_t = 500.0)]
    pub fault_m: f64,

    /// Demo shunt fault resistance in ohms.
    #[arg(long, default_value_t = 10.0)]
    pub fault_ohm: f64,
}

#[derive(Debug, Args)]
pub struct TablesArgs {
    /// Table ids (all when omitted).
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5))]
    pub id: Vec<u8>,

    /// Resolution convention for table 4 (FULL reproduces it).
    #[arg(long, value_parser = parse_convention)]
    pub convention: Option<Convention>,

    #[arg(long, value_parser = parse_zero_crossing, default_value = "nominal")]
    pub zero_crossing: ZeroCrossing,

    /// Expected values CSV replacing the built-in set.
    #[arg(long, value_name = "FILE")]
    pub expectations: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: Family,

    #[arg(long, value_enum, default_value_t = Span::Narrowband)]
    pub span: Span,

    /// Lower bandwidth in Hz (overrides --span).
    #[arg(long)]
    pub b_min: Option<f64>,

    /// Upper bandwidth in Hz (overrides --span).
    #[arg(long)]
    pub b_max: Option<f64>,

    #[arg(long, default_value_t = 200)]
    pub points: usize,

    /// HS-OFDM subcarriers.
    #[arg(long, default_value_t = 512)]
    pub n: usize,

    #[arg(long, value_parser = parse_convention, default_value = "full")]
    pub convention: Convention,

    #[arg(long, value_parser = parse_zero_crossing, default_value = "nominal")]
    pub zero_crossing: ZeroCrossing,

    /// Repetition intervals in seconds (repeatable).
    #[arg(long)]
    pub delta_tp: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Span {
    Narrowband,
    Broadband,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: plc_tdr::Error| e.to_string())
}

fn parse_band(s: &str) -> Result<RegulatoryBand, String> {
    s.parse().map_err(|e: plc_tdr::Error| e.to_string())
}

fn parse_convention(s: &str) -> Result<Convention, String> {
    s.parse().map_err(|e: plc_tdr::Error| e.to_string())
}

fn parse_zero_crossing(s: &str) -> Result<ZeroCrossing, String> {
    s.parse().map_err(|e: plc_tdr::Error| e.to_string())
}
