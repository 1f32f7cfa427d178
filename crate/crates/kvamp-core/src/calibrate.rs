//! Estimation of the model parameters `a` and `r` from measurements, plus
//! reference presets for four well-known store designs.
//!
//! `a` comes from compaction traces: for each merge,
//! `a = MSST_L / (MSST_U * (TSST_L / TSST_U))` compares the lower-level SSTs
//! actually rewritten against the proportional share implied by the level
//! size ratio. `r` comes from a device throughput profile: achieved
//! throughput at the store's request size divided by the sequential peak.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::DesignKind;

/// One compaction event as logged by a store or a simulator.
///
/// `msst_*` count the SSTs participating in the merge from the upper and
/// lower level; `tsst_*` count all SSTs resident in those levels at merge
/// time. `level` is the upper level's index (0 for memtable flushes).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CompactionRecord {
    pub compaction_id: u64,
    pub level: u32,
    pub msst_u: u64,
    pub msst_l: u64,
    pub tsst_u: u64,
    pub tsst_l: u64,
    pub bytes_read: u64,
    pub bytes_written: u64,
}

impl CompactionRecord {
    pub fn validate(&self) -> Result<()> {
        if self.msst_u == 0 {
            return Err(Error::param("msst_u", "a merge reads at least one upper SST"));
        }
        if self.msst_u > self.tsst_u {
            return Err(Error::param("msst_u", "cannot exceed tsst_u"));
        }
        if self.msst_l > self.tsst_l {
            return Err(Error::param("msst_l", "cannot exceed tsst_l"));
        }
        Ok(())
    }

    /// Per-record merge-amplification estimate; `None` when the lower level
    /// was empty (the estimator is undefined there).
    pub fn merge_amplification(&self) -> Option<f64> {
        if self.tsst_l == 0 || self.tsst_u == 0 {
            return None;
        }
        Some((self.msst_l * self.tsst_u) as f64 / (self.msst_u * self.tsst_l) as f64)
    }
}

/// Aggregated merge-amplification statistics over a trace.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TraceStats {
    /// Per-compaction estimates, in trace order (defined records only).
    pub values: Vec<f64>,
    /// Unclamped mean of `values`.
    pub mean_raw: f64,
    /// Mean with each value clamped into `[0, 1]` first; the model's domain.
    pub mean_clamped: f64,
    /// Mean weighted by bytes moved per compaction (defined records only).
    pub mean_byte_weighted: f64,
    /// Mean over all records with first merges counted as zero-cost events.
    pub mean_with_first_merges_as_zero: f64,
    /// Number of defined records behind the means.
    pub samples: usize,
    /// Records skipped because the lower level was empty at merge time.
    /// First merges into an empty level cost nothing extra, so they carry no
    /// information about `a`; they are counted rather than dropped silently.
    pub first_merge_events: usize,
}

/// Estimates `a` from a compaction trace.
///
/// Records with an empty lower level are excluded from the means (the
/// estimator divides by `TSST_L`) and reported via `first_merge_events`.
pub fn estimate_a(trace: &[CompactionRecord]) -> Result<TraceStats> {
    if trace.is_empty() {
        return Err(Error::Empty("compaction trace"));
    }
    let mut values = Vec::new();
    let mut weighted_sum = 0.0;
    let mut weight_total = 0.0;
    let mut first_merge_events = 0usize;
    for record in trace {
        record.validate()?;
        match record.merge_amplification() {
            Some(a) => {
                values.push(a);
                let w = (record.bytes_read + record.bytes_written) as f64;
                weighted_sum += w * a;
                weight_total += w;
            }
            None => first_merge_events += 1,
        }
    }
    if values.is_empty() {
        return Err(Error::Empty("usable compaction records (all lower levels empty)"));
    }
    let samples = values.len();
    let mean_raw = values.iter().sum::<f64>() / samples as f64;
    let mean_clamped = values.iter().map(|v| v.clamp(0.0, 1.0)).sum::<f64>() / samples as f64;
    let mean_byte_weighted = if weight_total > 0.0 {
        weighted_sum / weight_total
    } else {
        mean_raw
    };
    let mean_with_first_merges_as_zero =
        values.iter().sum::<f64>() / (samples + first_merge_events) as f64;
    Ok(TraceStats {
        values,
        mean_raw,
        mean_clamped,
        mean_byte_weighted,
        mean_with_first_merges_as_zero,
        samples,
        first_merge_events,
    })
}

/// Queue depth assumed when a profile query does not specify one; stores
/// under load keep device queues around this depth.
pub const DEFAULT_QUEUE_DEPTH: u32 = 32;

/// Measurement slack tolerated above the sequential peak.
pub const PROFILE_PEAK_SLACK: f64 = 0.02;

/// One measured point of a device throughput profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProfileRow {
    pub request_bytes: u64,
    pub queue_depth: u32,
    pub throughput_bps: u64,
}

/// Request-size to throughput curve of one device, per queue depth.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DeviceProfile {
    pub device: String,
    pub sequential_peak_bps: u64,
    rows: Vec<ProfileRow>,
}

impl DeviceProfile {
    pub fn new(device: String, sequential_peak_bps: u64, mut rows: Vec<ProfileRow>) -> Result<Self> {
        if sequential_peak_bps == 0 {
            return Err(Error::param("sequential_peak_bps", "peak must be > 0"));
        }
        if rows.is_empty() {
            return Err(Error::Empty("profile rows"));
        }
        let ceiling = sequential_peak_bps as f64 * (1.0 + PROFILE_PEAK_SLACK);
        for row in &rows {
            if row.request_bytes == 0 {
                return Err(Error::param("request_bytes", "request size must be > 0"));
            }
            if row.throughput_bps as f64 > ceiling {
                return Err(Error::param(
                    "throughput_bps",
                    format!(
                        "{} exceeds the sequential peak {} beyond measurement slack",
                        row.throughput_bps, sequential_peak_bps
                    ),
                ));
            }
        }
        rows.sort_by_key(|r| (r.queue_depth, r.request_bytes));
        Ok(DeviceProfile {
            device,
            sequential_peak_bps,
            rows,
        })
    }

    pub fn rows(&self) -> &[ProfileRow] {
        &self.rows
    }

    pub fn queue_depths(&self) -> Vec<u32> {
        let mut depths: Vec<u32> = self.rows.iter().map(|r| r.queue_depth).collect();
        depths.dedup();
        depths
    }
}

/// Estimates `r` as achieved/peak throughput at the given request size and
/// queue depth, linearly interpolating between measured sizes. Queries
/// outside the measured size range are rejected rather than extrapolated.
pub fn estimate_r(profile: &DeviceProfile, request_bytes: u64, queue_depth: u32) -> Result<f64> {
    let rows: Vec<&ProfileRow> = profile
        .rows
        .iter()
        .filter(|r| r.queue_depth == queue_depth)
        .collect();
    if rows.is_empty() {
        return Err(Error::OutOfRange(format!(
            "no rows for queue depth {queue_depth}; available depths: {:?}",
            profile.queue_depths()
        )));
    }
    let first = rows.first().unwrap();
    let last = rows.last().unwrap();
    if request_bytes < first.request_bytes || request_bytes > last.request_bytes {
        return Err(Error::OutOfRange(format!(
            "request size {request_bytes} outside measured range {}..={}",
            first.request_bytes, last.request_bytes
        )));
    }
    let achieved = match rows.iter().position(|r| r.request_bytes >= request_bytes) {
        Some(i) if rows[i].request_bytes == request_bytes => rows[i].throughput_bps as f64,
        Some(i) => {
            let lo = rows[i - 1];
            let hi = rows[i];
            let t = (request_bytes - lo.request_bytes) as f64
                / (hi.request_bytes - lo.request_bytes) as f64;
            lo.throughput_bps as f64 + t * (hi.throughput_bps as f64 - lo.throughput_bps as f64)
        }
        None => unreachable!("range checked above"),
    };
    let r = achieved / profile.sequential_peak_bps as f64;
    if !(r > 0.0) {
        return Err(Error::param("r", "profile yields zero achieved throughput"));
    }
    Ok(r.min(1.0))
}

/// Reference `(a, r)` operating points for four store designs, all measured
/// at growth factor 8.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SystemPreset {
    pub name: String,
    pub a: f64,
    pub r: f64,
    pub design: DesignKind,
    pub growth: u64,
}

/// The bundled presets: RocksDB (leveling, in-place), Kreon (leveling, log,
/// small SSTs hence r < 1), BlobDB (leveling, log), PebblesDB (tiering).
pub fn preset_systems() -> Vec<SystemPreset> {
    alloc::vec![
        SystemPreset {
            name: String::from("RocksDB"),
            a: 0.68,
            r: 1.0,
            design: DesignKind::Leveling,
            growth: 8,
        },
        SystemPreset {
            name: String::from("Kreon"),
            a: 0.25,
            r: 0.91,
            design: DesignKind::LevelingLog,
            growth: 8,
        },
        SystemPreset {
            name: String::from("BlobDB"),
            a: 0.8,
            r: 1.0,
            design: DesignKind::LevelingLog,
            growth: 8,
        },
        SystemPreset {
            name: String::from("PebblesDB"),
            a: 0.0,
            r: 1.0,
            design: DesignKind::Tiering,
            growth: 8,
        },
    ]
}

/// Case-insensitive preset lookup.
pub fn preset(name: &str) -> Option<SystemPreset> {
    preset_systems()
        .into_iter()
        .find(|p| p.name.eq_ignore_ascii_case(name))
}
