//! `kvamp simulate`: compaction replays.

use kvamp_core::rational::Rational;
use kvamp_core::sim::{
    simulate_counters, simulate_ssts, Compaction, Granularity, KeyDistribution, Placement,
    SimConfig, SimReport, WorkloadSpec, DEFAULT_ZIPF_THETA,
};

use crate::cli::{OutputFormat, SimMode, SimulateArgs};
use crate::error::{CliError, CliResult};
use crate::fileconf::FileConfig;
use crate::formats::append_trace;
use crate::output::to_json_string;
use crate::units::parse_size;

const COUNTER_DEFAULT_S0: u128 = 64 << 20;
const SST_DEFAULT_S0: u128 = 256 << 10;

pub fn run(
    conf: &FileConfig,
    args: &SimulateArgs,
    seed: Option<u64>,
    format: OutputFormat,
) -> CliResult<String> {
    let design_name = args
        .design
        .clone()
        .or_else(|| conf.string("design"))
        .unwrap_or_else(|| "leveling".to_string());
    let compaction = match design_name.as_str() {
        "leveling" => Compaction::Leveling,
        "tiering" => Compaction::Tiering,
        other => {
            return Err(CliError::usage(format!(
                "unknown design `{other}` (expected leveling or tiering)"
            )))
        }
    };
    let log = args.log || conf.bool("log")?.unwrap_or(false);
    let placement = if log { Placement::ValueLog } else { Placement::InPlace };

    let growth = args.growth.or(conf.u64("growth")?).unwrap_or(8);
    let levels = args
        .levels
        .or(conf.u32("levels")?)
        .unwrap_or(match args.mode {
            SimMode::Counters => 3,
            SimMode::Ssts => 2,
        });
    let s0 = match &args.s0 {
        Some(s) => parse_size(s)?,
        None => conf.size("s0")?.unwrap_or(match args.mode {
            SimMode::Counters => COUNTER_DEFAULT_S0,
            SimMode::Ssts => SST_DEFAULT_S0,
        }),
    };
    let sst = match &args.sst {
        Some(s) => parse_size(s)?,
        None => conf.size("sst")?.unwrap_or(s0 / 8),
    };

    let mut config = SimConfig::new(compaction, placement, growth, levels, s0);
    config.sst_bytes = sst;
    config.drain_at_end = !args.no_drain;
    if args.per_sst || conf.bool("per_sst")?.unwrap_or(false) {
        config.granularity = Granularity::PerSst;
    }
    config.per_sst_pick = args.pick.or(conf.u32("pick")?).unwrap_or(1);
    if let Some(a) = args.a.as_deref().or(conf.raw("a")) {
        config.a_override = Some(Rational::from_decimal_str(a)?);
    }
    if let Some(p) = args.p.as_deref().or(conf.raw("p")) {
        config.key_value_ratio = Some(Rational::from_decimal_str(p)?);
    }

    match args.mode {
        SimMode::Counters => {
            if args.emit_trace.is_some() {
                return Err(CliError::usage(
                    "--emit-trace needs --mode ssts (counter replay has no SST counts)",
                ));
            }
            let dataset = match &args.dataset {
                Some(s) => parse_size(s)?,
                None => conf.size("dataset")?.unwrap_or_else(|| {
                    s0.saturating_mul((growth as u128).pow(levels))
                }),
            };
            let report = simulate_counters(&config, dataset)?;
            render_report(&report, "counters", format)
        }
        SimMode::Ssts => {
            let distribution = parse_distribution(
                args.distribution
                    .as_deref()
                    .or(conf.raw("distribution"))
                    .unwrap_or("uniform"),
                args.theta.or(conf.f64("theta")?),
            )?;
            let workload = WorkloadSpec {
                num_pairs: args.pairs.or(conf.u64("pairs")?).unwrap_or(262_144),
                key_bytes: args.key_bytes.or(conf.u32("key_bytes")?).unwrap_or(16),
                value_bytes: args.value_bytes.or(conf.u32("value_bytes")?).unwrap_or(48),
                distribution,
                key_universe: args.universe.or(conf.u64("universe")?).unwrap_or(1 << 24),
                seed: seed.unwrap_or(42),
            };
            let outcome = simulate_ssts(&workload, &config)?;
            if let Some(path) = &args.emit_trace {
                append_trace(path, &outcome.trace)?;
            }
            render_report(&outcome.report, "ssts", format)
        }
    }
}

fn parse_distribution(name: &str, theta: Option<f64>) -> CliResult<KeyDistribution> {
    match name {
        "uniform" => Ok(KeyDistribution::Uniform),
        "zipf" => Ok(KeyDistribution::Zipf {
            theta: theta.unwrap_or(DEFAULT_ZIPF_THETA),
        }),
        "sorted" => Ok(KeyDistribution::Sorted),
        "sorted-stride" => Ok(KeyDistribution::SortedStride),
        other => Err(CliError::usage(format!(
            "unknown distribution `{other}` (expected uniform, zipf, sorted, or sorted-stride)"
        ))),
    }
}

fn render_report(report: &SimReport, mode: &str, format: OutputFormat) -> CliResult<String> {
    match format {
        OutputFormat::Json => to_json_string(report),
        OutputFormat::Csv => Err(CliError::usage(
            "simulate emits a single report; use --format text or json",
        )),
        OutputFormat::Text => {
            let mut out = String::new();
            out.push_str(&format!("mode = {mode}\n"));
            out.push_str(&format!("dataset_bytes = {}\n", report.dataset_bytes));
            out.push_str(&format!("bytes_read = {}\n", report.bytes_read));
            out.push_str(&format!("bytes_written = {}\n", report.bytes_written));
            out.push_str(&format!("amplification = {}\n", report.amplification));
            out.push_str(&format!(
                "write_amplification = {}\n",
                report.write_amplification
            ));
            out.push_str(&format!(
                "per_level_compactions = {:?}\n",
                report.per_level_compactions
            ));
            if let Some(a) = report.measured_a {
                out.push_str(&format!("measured_a = {a}\n"));
            }
            if let Some(a) = report.measured_a_clamped {
                out.push_str(&format!("measured_a_clamped = {a}\n"));
            }
            out.push_str(&format!("first_merge_events = {}\n", report.first_merge_events));
            out.push_str(&format!("resident_bytes = {}\n", report.resident_bytes));
            out.push_str(&format!("steps = {}\n", report.steps));
            for note in &report.notes {
                out.push_str(&format!("note: {note}\n"));
            }
            Ok(out)
        }
    }
}
