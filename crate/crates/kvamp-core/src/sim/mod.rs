//! Compaction replay at two fidelities.
//!
//! [`counters::simulate_counters`] replays flushes and merges tracking only
//! byte counts, applying the merge-amplification fraction as an exact
//! multiplier; it is the noise-free event-driven oracle for the closed-form
//! traffic expressions.
//!
//! [`ssts::simulate_ssts`] maintains real SST key ranges over a synthetic key
//! stream, merges exactly the overlapping lower-level SSTs, and measures
//! merge amplification empirically from the per-compaction SST counts.

pub mod counters;
pub mod rng;
pub mod ssts;
pub mod workload;

use alloc::string::String;
use alloc::vec::Vec;

use crate::calibrate::CompactionRecord;
use crate::error::{Error, Result};
use crate::rational::Rational;

pub use counters::simulate_counters;
pub use ssts::simulate_ssts;
pub use workload::{KeyDistribution, KeyStream, WorkloadSpec, DEFAULT_ZIPF_THETA};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Compaction {
    Leveling,
    Tiering,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Placement {
    InPlace,
    ValueLog,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Granularity {
    /// A compaction moves the whole source level.
    FullLevel,
    /// A compaction moves a few SSTs at a time, keeping levels near-full.
    PerSst,
}

/// Configuration shared by both simulators.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SimConfig {
    pub compaction: Compaction,
    pub placement: Placement,
    pub granularity: Granularity,
    /// Integer growth factor, >= 2.
    pub growth: u64,
    /// On-device level count, >= 1.
    pub levels: u32,
    /// Memory-level (memtable) capacity in bytes.
    pub s0_bytes: u128,
    /// SST size in bytes; must divide `s0_bytes`.
    pub sst_bytes: u128,
    /// Counter mode only: merge-amplification multiplier (default 1 for
    /// leveling; tiering structurally uses 0).
    pub a_override: Option<Rational>,
    /// Counter mode with a value log: key-to-value size ratio `p`.
    pub key_value_ratio: Option<Rational>,
    /// Per-SST mode: upper-level SSTs moved per compaction.
    pub per_sst_pick: u32,
    /// Move residual intermediate-level data to the last level at the end,
    /// approximating steady state.
    pub drain_at_end: bool,
}

impl SimConfig {
    pub fn new(compaction: Compaction, placement: Placement, growth: u64, levels: u32, s0_bytes: u128) -> Self {
        SimConfig {
            compaction,
            placement,
            granularity: Granularity::FullLevel,
            growth,
            levels,
            s0_bytes,
            sst_bytes: s0_bytes,
            a_override: None,
            key_value_ratio: None,
            per_sst_pick: 1,
            drain_at_end: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.growth < 2 {
            return Err(Error::param("growth", "integer growth factor must be >= 2"));
        }
        if self.levels < 1 {
            return Err(Error::param("levels", "level count must be >= 1"));
        }
        if self.s0_bytes == 0 {
            return Err(Error::param("s0_bytes", "memory level must be > 0 bytes"));
        }
        if self.sst_bytes == 0 || !self.s0_bytes.is_multiple_of(self.sst_bytes) {
            return Err(Error::Geometry(
                "SST size must be positive and divide the memory level size".into(),
            ));
        }
        if self.per_sst_pick == 0 {
            return Err(Error::param("per_sst_pick", "must move at least one SST"));
        }
        if self.granularity == Granularity::PerSst && self.compaction == Compaction::Tiering {
            return Err(Error::Geometry(
                "per-SST compaction applies to leveling only".into(),
            ));
        }
        if let Some(a) = &self.a_override {
            if a.checked_cmp(&Rational::ZERO)? == core::cmp::Ordering::Less
                || a.checked_cmp(&Rational::ONE)? == core::cmp::Ordering::Greater
            {
                return Err(Error::param("a", "merge amplification must be in [0, 1]"));
            }
        }
        if let Some(p) = &self.key_value_ratio {
            if p.checked_cmp(&Rational::ZERO)? != core::cmp::Ordering::Greater {
                return Err(Error::param("p", "key-to-value ratio must be > 0"));
            }
        }
        // A value-log config without a key-to-value ratio is still valid
        // here: the SST simulator derives the split from the workload's key
        // and value sizes. The counter simulator checks for it on use.
        Ok(())
    }

    /// Fraction of each ingested byte batch that is key data: `p/(p+1)` with
    /// a value log, 1 otherwise.
    pub(crate) fn key_fraction(&self) -> Result<Rational> {
        match self.placement {
            Placement::InPlace => Ok(Rational::ONE),
            Placement::ValueLog => {
                let p = self.key_value_ratio.as_ref().ok_or_else(|| {
                    Error::param("p", "value-log counter simulation requires a key-to-value ratio")
                })?;
                p.checked_div(&p.checked_add(&Rational::ONE)?)
            }
        }
    }
}

/// Byte accounting from one simulated run.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SimReport {
    pub bytes_read: f64,
    pub bytes_written: f64,
    /// Bytes actually ingested (after any geometry truncation).
    pub dataset_bytes: u128,
    /// `(bytes_read + bytes_written) / dataset_bytes`.
    pub amplification: f64,
    /// `bytes_written / dataset_bytes`.
    pub write_amplification: f64,
    /// Compaction counts by source level (index 0 = memtable flushes).
    pub per_level_compactions: Vec<u64>,
    /// Mean of the per-compaction merge-amplification estimator; SST mode
    /// only. Raw mean; can exceed 1 on pathological merges.
    pub measured_a: Option<f64>,
    /// Same mean with each sample clamped into `[0, 1]`.
    pub measured_a_clamped: Option<f64>,
    /// Merges that found the lower level empty (excluded from the mean).
    pub first_merge_events: u64,
    /// Bytes resident in the final state (levels plus value log).
    pub resident_bytes: u128,
    /// Flush and compaction events processed.
    pub steps: u64,
    pub notes: Vec<String>,
}

impl SimReport {
    pub(crate) fn finish(
        bytes_read: f64,
        bytes_written: f64,
        dataset_bytes: u128,
        per_level_compactions: Vec<u64>,
        resident_bytes: u128,
        steps: u64,
        notes: Vec<String>,
    ) -> SimReport {
        let dataset = dataset_bytes as f64;
        SimReport {
            bytes_read,
            bytes_written,
            dataset_bytes,
            amplification: (bytes_read + bytes_written) / dataset,
            write_amplification: bytes_written / dataset,
            per_level_compactions,
            measured_a: None,
            measured_a_clamped: None,
            first_merge_events: 0,
            resident_bytes,
            steps,
            notes,
        }
    }
}

/// SST-level simulation output: the report plus the full compaction trace.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SimOutcome {
    pub report: SimReport,
    pub trace: Vec<CompactionRecord>,
}
