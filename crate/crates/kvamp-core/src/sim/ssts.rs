//! SST-level compaction replay over a synthetic key stream.
//!
//! Unlike the counter replay, merge amplification is not a parameter here:
//! a merge selects the source SSTs and reads back exactly the lower-level
//! SSTs whose key ranges overlap them. Every compaction is logged as a
//! [`CompactionRecord`], and the per-compaction estimator
//! `a = MSST_L / (MSST_U * (TSST_L / TSST_U))` is averaged into the report,
//! so the replay doubles as the measurement pipeline for `a`.

use alloc::format;
use alloc::vec::Vec;

use crate::calibrate::{self, CompactionRecord};
use crate::error::{Error, Result};
use crate::sim::workload::{KeyDistribution, KeyStream, WorkloadSpec};
use crate::sim::{Compaction, Granularity, Placement, SimConfig, SimOutcome, SimReport};

#[derive(Debug, Clone)]
struct SstUnit {
    /// Sorted keys; duplicates allowed (updates are not deduplicated).
    keys: Vec<u64>,
}

impl SstUnit {
    fn lo(&self) -> u64 {
        self.keys[0]
    }

    fn hi(&self) -> u64 {
        *self.keys.last().unwrap()
    }
}

/// One on-device level: leveling keeps at most one run; tiering stacks runs.
#[derive(Debug, Clone, Default)]
struct Level {
    runs: Vec<Vec<SstUnit>>,
    entries: u64,
}

impl Level {
    fn sst_count(&self) -> u64 {
        self.runs.iter().map(|r| r.len() as u64).sum()
    }

    fn take_all_keys(&mut self) -> Vec<u64> {
        let mut keys = Vec::with_capacity(self.entries as usize);
        for run in self.runs.drain(..) {
            for sst in run {
                keys.extend_from_slice(&sst.keys);
            }
        }
        self.entries = 0;
        keys.sort_unstable();
        keys
    }
}

struct SstSim<'a> {
    config: &'a SimConfig,
    entry_bytes: u64,
    pairs_per_sst: u64,
    /// Level capacities in entries, index 0 = on-device level 1.
    caps: Vec<u64>,
    levels: Vec<Level>,
    bytes_read: u128,
    bytes_written: u128,
    log_bytes: u128,
    steps: u64,
    compactions: Vec<u64>,
    trace: Vec<CompactionRecord>,
}

impl<'a> SstSim<'a> {
    #[allow(clippy::too_many_arguments)]
    fn record(&mut self, level: u32, msst_u: u64, msst_l: u64, tsst_u: u64, tsst_l: u64, read: u64, written: u64) {
        self.trace.push(CompactionRecord {
            compaction_id: self.trace.len() as u64,
            level,
            msst_u,
            msst_l,
            tsst_u,
            tsst_l,
            bytes_read: read,
            bytes_written: written,
        });
        self.compactions[level as usize] += 1;
        self.steps += 1;
    }

    fn split_into_ssts(&self, keys: Vec<u64>) -> Vec<SstUnit> {
        let mut out = Vec::with_capacity(keys.len() / self.pairs_per_sst as usize + 1);
        let mut keys = keys;
        while keys.len() as u64 > self.pairs_per_sst {
            let rest = keys.split_off(self.pairs_per_sst as usize);
            out.push(SstUnit { keys });
            keys = rest;
        }
        if !keys.is_empty() {
            out.push(SstUnit { keys });
        }
        out
    }

    /// Merges `incoming` (sorted) into the single run of on-device level
    /// `target` (0-based), reading back exactly the overlapping SSTs.
    fn merge_into_leveled(
        &mut self,
        target: usize,
        incoming: Vec<u64>,
        src_level: u32,
        src_ssts: u64,
        tsst_u: u64,
        src_read: u64,
    ) {
        if self.levels[target].runs.is_empty() {
            self.levels[target].runs.push(Vec::new());
        }
        let lo = incoming[0];
        let hi = *incoming.last().unwrap();

        let run_len;
        let start;
        let overlap_keys: Vec<u64>;
        {
            let run = &mut self.levels[target].runs[0];
            run_len = run.len();
            start = run.partition_point(|sst| sst.hi() < lo);
            let end = start + run[start..].partition_point(|sst| sst.lo() <= hi);
            let removed: Vec<SstUnit> = run.drain(start..end).collect();
            let mut keys = Vec::with_capacity(removed.iter().map(|s| s.keys.len()).sum());
            for sst in removed {
                keys.extend_from_slice(&sst.keys);
            }
            overlap_keys = keys;
        }
        let msst_l = run_len - self.levels[target].runs[0].len();
        let overlap_entries = overlap_keys.len() as u64;
        let merged = merge_sorted(incoming, overlap_keys);
        let merged_entries = merged.len() as u64;

        let read = src_read + overlap_entries * self.entry_bytes;
        let written = merged_entries * self.entry_bytes;
        self.bytes_read += read as u128;
        self.bytes_written += written as u128;

        let new_ssts = self.split_into_ssts(merged);
        let run = &mut self.levels[target].runs[0];
        run.splice(start..start, new_ssts);
        self.levels[target].entries += merged_entries - overlap_entries;

        self.record(
            src_level,
            src_ssts,
            msst_l as u64,
            tsst_u,
            run_len as u64,
            read,
            written,
        );
        #[cfg(debug_assertions)]
        self.assert_leveled_invariant(target);
    }

    #[cfg(debug_assertions)]
    fn assert_leveled_invariant(&self, target: usize) {
        let run = &self.levels[target].runs[0];
        for w in run.windows(2) {
            // Duplicate keys may touch at SST boundaries; they must never
            // properly interleave.
            assert!(w[0].hi() <= w[1].lo(), "leveled run out of order");
        }
    }

    fn over_capacity(&self, idx: usize) -> bool {
        idx + 1 < self.levels.len() && self.levels[idx].entries >= self.caps[idx]
    }

    /// Restores capacity invariants from level `from` downward.
    fn cascade(&mut self, from: usize, cursors: &mut [u64]) {
        let mut idx = from;
        while idx + 1 < self.levels.len() {
            if !self.over_capacity(idx) {
                idx += 1;
                continue;
            }
            match (self.config.compaction, self.config.granularity) {
                (Compaction::Leveling, Granularity::FullLevel) => self.compact_full_level(idx),
                (Compaction::Leveling, Granularity::PerSst) => {
                    while self.over_capacity(idx) {
                        self.compact_per_sst(idx, cursors);
                    }
                }
                (Compaction::Tiering, _) => self.compact_tiered(idx),
            }
            // The move may have overfilled the next level; keep going there.
            idx += 1;
        }
    }

    fn compact_full_level(&mut self, idx: usize) {
        let src_ssts = self.levels[idx].sst_count();
        let entries = self.levels[idx].entries;
        let keys = self.levels[idx].take_all_keys();
        let src_read = entries * self.entry_bytes;
        self.merge_into_leveled(idx + 1, keys, (idx + 1) as u32, src_ssts, src_ssts, src_read);
    }

    fn compact_per_sst(&mut self, idx: usize, cursors: &mut [u64]) {
        let pick = self.config.per_sst_pick as usize;
        let tsst_u = self.levels[idx].sst_count();
        let (keys, picked, src_read) = {
            let run = &mut self.levels[idx].runs[0];
            // Round-robin over the key space: resume past the last merged
            // key, wrapping to the start.
            let mut at = run.partition_point(|sst| sst.lo() <= cursors[idx]);
            if at >= run.len() {
                at = 0;
            }
            let end = (at + pick).min(run.len());
            let removed: Vec<SstUnit> = run.drain(at..end).collect();
            cursors[idx] = removed.last().unwrap().hi();
            let mut keys = Vec::new();
            for sst in &removed {
                keys.extend_from_slice(&sst.keys);
            }
            let entries = keys.len() as u64;
            (keys, removed.len() as u64, entries * self.entry_bytes)
        };
        self.levels[idx].entries -= src_read / self.entry_bytes;
        self.merge_into_leveled(idx + 1, keys, (idx + 1) as u32, picked, tsst_u, src_read);
    }

    fn compact_tiered(&mut self, idx: usize) {
        let src_ssts = self.levels[idx].sst_count();
        let entries = self.levels[idx].entries;
        let keys = self.levels[idx].take_all_keys();
        let src_read = entries * self.entry_bytes;
        let written = entries * self.entry_bytes;
        self.bytes_read += src_read as u128;
        self.bytes_written += written as u128;
        let tsst_l = self.levels[idx + 1].sst_count();
        let ssts = self.split_into_ssts(keys);
        self.levels[idx + 1].runs.push(ssts);
        self.levels[idx + 1].entries += entries;
        self.record((idx + 1) as u32, src_ssts, 0, src_ssts, tsst_l, src_read, written);
    }

    fn flush(&mut self, mut batch: Vec<u64>, pair_bytes: u64, key_bytes: u64) {
        batch.sort_unstable();
        let pairs = batch.len() as u64;
        let src_ssts = (pairs * self.entry_bytes).div_ceil(self.config.sst_bytes as u64).max(1);
        if self.config.placement == Placement::ValueLog {
            // Full pairs are appended to the value log; only keys level.
            let appended = pairs * pair_bytes;
            self.bytes_written += appended as u128;
            self.log_bytes += appended as u128;
            let _ = key_bytes;
        }
        match self.config.compaction {
            Compaction::Leveling => {
                // Flushing from memory: no device read for the source.
                self.merge_into_leveled(0, batch, 0, src_ssts, src_ssts, 0);
            }
            Compaction::Tiering => {
                let entries = batch.len() as u64;
                let written = entries * self.entry_bytes;
                self.bytes_written += written as u128;
                let tsst_l = self.levels[0].sst_count();
                let ssts = self.split_into_ssts(batch);
                self.levels[0].runs.push(ssts);
                self.levels[0].entries += entries;
                self.record(0, src_ssts, 0, src_ssts, tsst_l, 0, written);
            }
        }
    }
}

fn merge_sorted(a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    if b.is_empty() {
        return a;
    }
    if a.is_empty() {
        return b;
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Replays the workload through real SST key ranges and measures merge
/// amplification from the recorded compactions.
pub fn simulate_ssts(workload: &WorkloadSpec, config: &SimConfig) -> Result<SimOutcome> {
    config.validate()?;
    workload.validate()?;

    let pair_bytes = workload.pair_bytes();
    let entry_bytes = match config.placement {
        Placement::InPlace => pair_bytes,
        Placement::ValueLog => workload.key_bytes as u64,
    };
    let pairs_per_sst = config.sst_bytes as u64 / entry_bytes;
    if pairs_per_sst == 0 {
        return Err(Error::Geometry(format!(
            "SST of {} bytes cannot hold one {}-byte entry",
            config.sst_bytes, entry_bytes
        )));
    }
    let memtable_pairs = (config.s0_bytes as u64) / pair_bytes;
    if memtable_pairs == 0 {
        return Err(Error::Geometry(format!(
            "memory level of {} bytes cannot hold one {}-byte pair",
            config.s0_bytes, pair_bytes
        )));
    }

    let mut notes = Vec::new();
    let flushes = workload.num_pairs / memtable_pairs;
    let perfect = (config.growth as u128).pow(config.levels);
    if flushes as u128 != perfect {
        notes.push(format!(
            "workload is {flushes} flushes, not the steady-state f^l = {perfect}"
        ));
    }
    if !workload.num_pairs.is_multiple_of(memtable_pairs) {
        notes.push(format!(
            "final partial batch of {} pairs flushed at end of stream",
            workload.num_pairs % memtable_pairs
        ));
    }

    // Capacities in entries: flush size times f^i per on-device level.
    let mut caps = Vec::with_capacity(config.levels as usize);
    let mut cap = memtable_pairs as u128;
    for _ in 0..config.levels {
        cap = cap.saturating_mul(config.growth as u128);
        caps.push(cap.min(u64::MAX as u128) as u64);
    }

    let mut sim = SstSim {
        config,
        entry_bytes,
        pairs_per_sst,
        caps,
        levels: alloc::vec![Level::default(); config.levels as usize],
        bytes_read: 0,
        bytes_written: 0,
        log_bytes: 0,
        steps: 0,
        compactions: alloc::vec![0u64; config.levels as usize],
        trace: Vec::new(),
    };
    let mut cursors = alloc::vec![0u64; config.levels as usize];

    let mut stream = KeyStream::new(workload, pairs_per_sst)?;
    let mut memtable: Vec<u64> = Vec::with_capacity(memtable_pairs as usize);
    let mut ingested_pairs = 0u64;
    loop {
        match stream.next() {
            Some(key) => {
                memtable.push(key);
                if memtable.len() as u64 == memtable_pairs {
                    ingested_pairs += memtable.len() as u64;
                    sim.flush(core::mem::take(&mut memtable), pair_bytes, workload.key_bytes as u64);
                    sim.cascade(0, &mut cursors);
                }
            }
            None => {
                if !memtable.is_empty() {
                    ingested_pairs += memtable.len() as u64;
                    sim.flush(core::mem::take(&mut memtable), pair_bytes, workload.key_bytes as u64);
                    sim.cascade(0, &mut cursors);
                }
                break;
            }
        }
    }

    if config.drain_at_end {
        let mut drained = 0;
        for idx in 0..config.levels as usize - 1 {
            if sim.levels[idx].entries == 0 {
                continue;
            }
            match config.compaction {
                Compaction::Leveling => sim.compact_full_level(idx),
                Compaction::Tiering => sim.compact_tiered(idx),
            }
            drained += 1;
        }
        if drained > 0 {
            notes.push(format!("drained {drained} intermediate levels into the last level"));
        }
    }

    let dataset_bytes = ingested_pairs as u128 * pair_bytes as u128;
    let resident_entries: u64 = sim.levels.iter().map(|l| l.entries).sum();
    let resident_bytes = resident_entries as u128 * entry_bytes as u128 + sim.log_bytes;

    let mut report = SimReport::finish(
        sim.bytes_read as f64,
        sim.bytes_written as f64,
        dataset_bytes,
        sim.compactions,
        resident_bytes,
        sim.steps,
        notes,
    );
    if let Ok(stats) = calibrate::estimate_a(&sim.trace) {
        report.measured_a = Some(stats.mean_raw);
        report.measured_a_clamped = Some(stats.mean_clamped);
        report.first_merge_events = stats.first_merge_events as u64;
    } else {
        report.first_merge_events = sim
            .trace
            .iter()
            .filter(|r| r.merge_amplification().is_none())
            .count() as u64;
    }

    Ok(SimOutcome {
        report,
        trace: sim.trace,
    })
}

/// Workload/config pair at desk-testable scale: 256Ki pairs of 64 bytes,
/// growth factor 8, two on-device levels, eight SSTs per flush.
pub fn reference_workload(distribution: KeyDistribution, seed: u64) -> (WorkloadSpec, SimConfig) {
    let workload = WorkloadSpec {
        num_pairs: 262_144,
        key_bytes: 16,
        value_bytes: 48,
        distribution,
        key_universe: 1 << 24,
        seed,
    };
    let mut config = SimConfig::new(
        Compaction::Leveling,
        Placement::InPlace,
        8,
        2,
        262_144 * 64 / 64, // dataset / f^l
    );
    config.sst_bytes = config.s0_bytes / 8;
    (workload, config)
}
