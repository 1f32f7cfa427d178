//! Command-line interface definition.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "kvamp",
    version,
    about = "Insert-path I/O amplification models, optimizers, and simulators for multi-level key-value stores",
    after_help = "Exit codes: 0 success, 1 usage error, 2 domain/geometry error, 3 I/O error."
)]
pub struct Cli {
    /// Output format (single results default to text, tables to csv)
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,

    /// Seed for workload generation
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Write output to this file instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Key-value config file mirroring flag names; flags override it
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one design's cost ratio (and traffic, when sizes are given)
    Eval(EvalArgs),
    /// Emit a CSV dataset over one or two parameter axes, or a named preset
    Sweep(SweepArgs),
    /// Find cost-minimizing level counts and growth factors
    Optimize(OptimizeArgs),
    /// Replay compactions (byte counters or real SST key ranges)
    Simulate(SimulateArgs),
    /// Estimate model parameters from a trace or device profile
    Calibrate(CalibrateArgs),
    /// Compare two designs along one axis and report the benefit ratio
    Compare(CompareArgs),
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Start from a bundled system preset (RocksDB, Kreon, BlobDB,
    /// PebblesDB); explicit flags override its values
    #[arg(long)]
    pub system: Option<String>,
    /// Compaction design: leveling or tiering
    #[arg(long)]
    pub design: Option<String>,
    /// Store values in an append-only log (requires --p)
    #[arg(long)]
    pub log: bool,
    /// Merge-amplification fraction in [0,1] (leveling only)
    #[arg(long)]
    pub a: Option<f64>,
    /// Achieved fraction of sequential device throughput in (0,1]
    #[arg(long)]
    pub r: Option<f64>,
    /// Growth factor between levels (> 1)
    #[arg(long)]
    pub f: Option<f64>,
    /// Number of on-device levels (>= 1, may be fractional)
    #[arg(long)]
    pub l: Option<f64>,
    /// Dataset-to-memory ratio S_l/S_0 (> 1)
    #[arg(long)]
    pub c: Option<f64>,
    /// Key-to-value size ratio K_l/V_l (> 0, log designs)
    #[arg(long)]
    pub p: Option<f64>,
    /// Last-level (dataset) size, e.g. 16GiB; enables traffic output
    #[arg(long)]
    pub sl: Option<String>,
    /// Memory-level size; with f and l implies --sl
    #[arg(long)]
    pub s0: Option<String>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Named preset dataset (fig2a, fig2b, fig5a, fig5b, fig6a, fig6b, fig7b)
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long)]
    pub design: Option<String>,
    #[arg(long)]
    pub log: bool,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub f: Option<f64>,
    #[arg(long)]
    pub l: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    /// Swept axis, `name=start:stop:step` or `name=v1,v2,...` (max 2)
    #[arg(long = "axis")]
    pub axes: Vec<String>,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(long)]
    pub design: Option<String>,
    #[arg(long)]
    pub log: bool,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    /// Dataset-to-memory ratio the optimum is constrained to
    #[arg(long)]
    pub c: Option<f64>,
    /// Smallest level count scanned
    #[arg(long, default_value_t = 1)]
    pub l_min: u32,
    /// Largest level count scanned
    #[arg(long, default_value_t = 30)]
    pub l_max: u32,
    /// Print the simplified closed form l = ln C, f = e
    #[arg(long)]
    pub simplified: bool,
    /// Print the exact closed form via the Lambert W function
    #[arg(long)]
    pub exact: bool,
    /// Optimization constraint (default dram-ratio)
    #[arg(long, value_enum)]
    pub constraint: Option<ConstraintKind>,
    /// Level count for the total-size constraint
    #[arg(long)]
    pub levels: Option<u32>,
    /// Total capacity S_0+...+S_l for the total-size constraint
    #[arg(long)]
    pub total_bytes: Option<String>,
    /// Memory-level size for the total-size constraint
    #[arg(long)]
    pub s0: Option<String>,
    /// Anchor the last growth factor instead of solving for it
    #[arg(long)]
    pub anchor_last_growth: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConstraintKind {
    /// Constant dataset-to-memory ratio C = S_l/S_0
    DramRatio,
    /// Constant total capacity S_0 + ... + S_l
    TotalSize,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// counters: byte accounting replay; ssts: real key-range replay
    #[arg(long, value_enum, default_value_t = SimMode::Counters)]
    pub mode: SimMode,
    #[arg(long)]
    pub design: Option<String>,
    /// Separate values into an append-only log
    #[arg(long)]
    pub log: bool,
    /// Compact a few SSTs at a time instead of whole levels
    #[arg(long)]
    pub per_sst: bool,
    /// Upper-level SSTs moved per per-SST compaction
    #[arg(long)]
    pub pick: Option<u32>,
    /// Integer growth factor (default 8)
    #[arg(long)]
    pub growth: Option<u64>,
    /// On-device level count (default: counters 3, ssts 2)
    #[arg(long)]
    pub levels: Option<u32>,
    /// Memory-level capacity (default: counters 64MiB, ssts 256KiB)
    #[arg(long)]
    pub s0: Option<String>,
    /// SST size (default s0/8)
    #[arg(long)]
    pub sst: Option<String>,
    /// Merge-amplification override, exact decimal (counters only)
    #[arg(long)]
    pub a: Option<String>,
    /// Key-to-value ratio, exact decimal (counters with --log)
    #[arg(long)]
    pub p: Option<String>,
    /// Dataset size for counter mode (default s0 * f^l)
    #[arg(long)]
    pub dataset: Option<String>,
    /// Leave residual data in intermediate levels at the end
    #[arg(long)]
    pub no_drain: bool,
    /// Append the compaction trace to this file (ssts mode)
    #[arg(long)]
    pub emit_trace: Option<PathBuf>,
    /// Number of key-value pairs (ssts mode, default 262144)
    #[arg(long)]
    pub pairs: Option<u64>,
    /// Key size in bytes (default 16)
    #[arg(long)]
    pub key_bytes: Option<u32>,
    /// Value size in bytes (default 48)
    #[arg(long)]
    pub value_bytes: Option<u32>,
    /// Key ordering: uniform, zipf, sorted, sorted-stride
    #[arg(long)]
    pub distribution: Option<String>,
    /// Zipf skew parameter (default 0.99)
    #[arg(long)]
    pub theta: Option<f64>,
    /// Key universe size (default 2^24)
    #[arg(long)]
    pub universe: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SimMode {
    Counters,
    Ssts,
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    /// Compaction trace file (estimates the merge-amplification fraction a)
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Device throughput profile (estimates the throughput fraction r)
    #[arg(long)]
    pub profile: Option<PathBuf>,
    /// Request size to evaluate the profile at, e.g. 8KiB
    #[arg(long)]
    pub request: Option<String>,
    /// Queue depth to evaluate the profile at (default 32)
    #[arg(long)]
    pub queue_depth: Option<u32>,
    /// Skip malformed trace lines instead of failing on the first one
    #[arg(long)]
    pub lenient: bool,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Baseline design: leveling, leveling-log, tiering, tiering-log
    #[arg(long)]
    pub baseline: String,
    /// Alternative design the baseline is divided by
    #[arg(long)]
    pub alternative: String,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub f: Option<f64>,
    #[arg(long)]
    pub l: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    /// Swept axis, `name=start:stop:step` or `name=v1,v2,...`
    #[arg(long)]
    pub axis: String,
}
