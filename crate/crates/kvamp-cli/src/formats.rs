//! On-disk formats: line-delimited JSON compaction traces and CSV device
//! throughput profiles.
//!
//! Trace file: one JSON object per line with integer fields
//! `{compaction_id, level, msst_u, msst_l, tsst_u, tsst_l, bytes_read,
//! bytes_written}`.
//!
//! Device profile: a preamble line `sequential_peak_bps=<integer>` followed
//! by a CSV table with header `request_bytes,queue_depth,throughput_bps`.

use std::io::Write;
use std::path::Path;

use kvamp_core::calibrate::{DeviceProfile, ProfileRow};
use kvamp_core::CompactionRecord;

use crate::error::{CliError, CliResult};

/// Reads a trace file. In strict mode the first malformed line fails the
/// whole read; with `lenient` malformed lines are skipped and reported.
pub fn read_trace(path: &Path, lenient: bool) -> CliResult<(Vec<CompactionRecord>, Vec<String>)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    let mut records = Vec::new();
    let mut warnings = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let parsed: Result<CompactionRecord, String> = serde_json::from_str(line)
            .map_err(|e| e.to_string())
            .and_then(|rec: CompactionRecord| rec.validate().map(|_| rec).map_err(|e| e.to_string()));
        match parsed {
            Ok(rec) => records.push(rec),
            Err(msg) => {
                let report = format!("{}:{}: malformed record: {msg}", path.display(), lineno + 1);
                if lenient {
                    warnings.push(report);
                } else {
                    return Err(CliError::io(report));
                }
            }
        }
    }
    Ok((records, warnings))
}

pub fn write_trace(path: &Path, records: &[CompactionRecord]) -> CliResult<()> {
    let file = std::fs::File::create(path)
        .map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    write_records(file, path, records)
}

/// Appends to an existing trace (creating it if missing), so traces from
/// several runs can accumulate in one file.
pub fn append_trace(path: &Path, records: &[CompactionRecord]) -> CliResult<()> {
    let file = std::fs::OpenOptions::new()
        .append(true)
        .create(true)
        .open(path)
        .map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    write_records(file, path, records)
}

fn write_records(mut file: std::fs::File, path: &Path, records: &[CompactionRecord]) -> CliResult<()> {
    for rec in records {
        let line = serde_json::to_string(rec)
            .map_err(|e| CliError::io(format!("trace serialization: {e}")))?;
        writeln!(file, "{line}").map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

pub const PROFILE_HEADER: &str = "request_bytes,queue_depth,throughput_bps";

pub fn read_device_profile(path: &Path) -> CliResult<DeviceProfile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(n, l)| (n + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (lineno, preamble) = lines
        .next()
        .ok_or_else(|| CliError::io(format!("{}: empty profile", path.display())))?;
    let peak: u64 = preamble
        .strip_prefix("sequential_peak_bps=")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| {
            CliError::io(format!(
                "{}:{}: expected `sequential_peak_bps=<integer>`, got `{preamble}`",
                path.display(),
                lineno
            ))
        })?;

    let (lineno, header) = lines
        .next()
        .ok_or_else(|| CliError::io(format!("{}: missing CSV header", path.display())))?;
    if header != PROFILE_HEADER {
        return Err(CliError::io(format!(
            "{}:{}: expected header `{PROFILE_HEADER}`, got `{header}`",
            path.display(),
            lineno
        )));
    }

    let mut rows = Vec::new();
    for (lineno, line) in lines {
        let fields: Vec<&str> = line.split(',').map(|f| f.trim()).collect();
        let parsed = (|| -> Option<ProfileRow> {
            if fields.len() != 3 {
                return None;
            }
            Some(ProfileRow {
                request_bytes: fields[0].parse().ok()?,
                queue_depth: fields[1].parse().ok()?,
                throughput_bps: fields[2].parse().ok()?,
            })
        })();
        match parsed {
            Some(row) => rows.push(row),
            None => {
                return Err(CliError::io(format!(
                    "{}:{}: malformed profile row `{line}`",
                    path.display(),
                    lineno
                )))
            }
        }
    }

    let device = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "device".to_string());
    DeviceProfile::new(device, peak, rows).map_err(|e| CliError::io(e.to_string()))
}
