//! `kvamp calibrate`: estimate `a` from a trace or `r` from a profile.

use kvamp_core::calibrate::{estimate_a, estimate_r, DEFAULT_QUEUE_DEPTH};
use serde::Serialize;

use crate::cli::{CalibrateArgs, OutputFormat};
use crate::error::{CliError, CliResult};
use crate::fileconf::FileConfig;
use crate::formats::{read_device_profile, read_trace};
use crate::output::to_json_string;
use crate::units::parse_size;

#[derive(Debug, Serialize)]
struct ThroughputResult {
    device: String,
    request_bytes: u64,
    queue_depth: u32,
    r: f64,
}

pub fn run(conf: &FileConfig, args: &CalibrateArgs, format: OutputFormat) -> CliResult<String> {
    match (&args.trace, &args.profile) {
        (Some(_), Some(_)) => Err(CliError::usage(
            "--trace and --profile are mutually exclusive",
        )),
        (None, None) => Err(CliError::usage(
            "calibrate needs --trace <file> (to estimate a) or --profile <file> --request <size> (to estimate r)",
        )),
        (Some(trace_path), None) => {
            let (records, warnings) = read_trace(trace_path, args.lenient)?;
            for w in &warnings {
                eprintln!("{w}");
            }
            let stats = estimate_a(&records)?;
            match format {
                OutputFormat::Json => to_json_string(&stats),
                OutputFormat::Csv => Err(CliError::usage(
                    "calibrate emits a single result; use --format text or json",
                )),
                OutputFormat::Text => {
                    let mut out = String::new();
                    out.push_str(&format!("samples = {}\n", stats.samples));
                    out.push_str(&format!("first_merge_events = {}\n", stats.first_merge_events));
                    out.push_str(&format!("mean_a = {}\n", stats.mean_raw));
                    out.push_str(&format!("mean_a_clamped = {}\n", stats.mean_clamped));
                    out.push_str(&format!("mean_a_byte_weighted = {}\n", stats.mean_byte_weighted));
                    out.push_str(&format!(
                        "mean_a_with_first_merges_as_zero = {}\n",
                        stats.mean_with_first_merges_as_zero
                    ));
                    Ok(out)
                }
            }
        }
        (None, Some(profile_path)) => {
            let request = args
                .request
                .as_deref()
                .map(parse_size)
                .or_else(|| conf.size("request").transpose())
                .transpose()?
                .ok_or_else(|| CliError::usage("--profile requires --request <size>"))?;
            let request: u64 = request
                .try_into()
                .map_err(|_| CliError::usage("--request does not fit in 64 bits"))?;
            let queue_depth = args
                .queue_depth
                .or(conf.u32("queue_depth")?)
                .unwrap_or(DEFAULT_QUEUE_DEPTH);
            let profile = read_device_profile(profile_path)?;
            let r = estimate_r(&profile, request, queue_depth)?;
            let result = ThroughputResult {
                device: profile.device.clone(),
                request_bytes: request,
                queue_depth,
                r,
            };
            match format {
                OutputFormat::Json => to_json_string(&result),
                OutputFormat::Csv => Err(CliError::usage(
                    "calibrate emits a single result; use --format text or json",
                )),
                OutputFormat::Text => Ok(format!(
                    "device = {}\nrequest_bytes = {}\nqueue_depth = {}\nr = {}\n",
                    result.device, result.request_bytes, result.queue_depth, result.r
                )),
            }
        }
    }
}
