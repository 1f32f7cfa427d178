//! Grid sweeps over model parameters and the bundled figure-data presets.

use kvamp_core::model::amplification_factor;
use kvamp_core::DesignKind;

use crate::error::{CliError, CliResult};
use crate::params::{resolve_params, ResolvedParams};

/// A parameter axis: name plus the grid values in sweep order.
#[derive(Debug, Clone)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

/// Parses "a=0.1:1.0:0.1" (inclusive range with step) or "l=1,2,3".
pub fn parse_axis(spec: &str) -> CliResult<Axis> {
    let Some((name, rest)) = spec.split_once('=') else {
        return Err(CliError::usage(format!(
            "axis `{spec}` must look like name=start:stop:step or name=v1,v2,..."
        )));
    };
    let name = name.trim().to_string();
    if !["a", "r", "f", "l", "c", "p"].contains(&name.as_str()) {
        return Err(CliError::usage(format!(
            "unknown axis `{name}` (expected one of a, r, f, l, c, p)"
        )));
    }
    let values = if rest.contains(':') {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 3 {
            return Err(CliError::usage(format!(
                "range axis `{spec}` must be name=start:stop:step"
            )));
        }
        let parse = |s: &str| -> CliResult<f64> {
            s.trim()
                .parse()
                .map_err(|_| CliError::usage(format!("`{s}` in axis `{spec}` is not a number")))
        };
        let (start, stop, step) = (parse(parts[0])?, parse(parts[1])?, parse(parts[2])?);
        if step <= 0.0 || stop < start {
            return Err(CliError::usage(format!(
                "axis `{spec}` needs start <= stop and step > 0"
            )));
        }
        let mut values = Vec::new();
        let mut i = 0u64;
        loop {
            let v = start + step * i as f64;
            if v > stop + 1e-9 * step {
                break;
            }
            values.push(v);
            i += 1;
        }
        values
    } else {
        rest.split(',')
            .map(|s| {
                s.trim()
                    .parse()
                    .map_err(|_| CliError::usage(format!("`{s}` in axis `{spec}` is not a number")))
            })
            .collect::<CliResult<Vec<f64>>>()?
    };
    if values.is_empty() {
        return Err(CliError::usage(format!("axis `{spec}` is empty")));
    }
    Ok(Axis { name, values })
}

/// A tabular sweep result: header row plus data rows with one note per
/// skipped out-of-domain point.
#[derive(Debug, Clone, serde::Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub skipped: Vec<String>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|v| format_cell(*v)).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn format_cell(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        format!("{v}")
    } else {
        format!("{v:.6}")
    }
}

/// Fixed parameters of a sweep; an axis overrides its field per point.
#[derive(Debug, Clone, Copy)]
pub struct SweepBase {
    pub design: DesignKind,
    pub a: Option<f64>,
    pub r: Option<f64>,
    pub f: Option<f64>,
    pub l: Option<f64>,
    pub c: Option<f64>,
    pub p: Option<f64>,
}

impl SweepBase {
    fn with_axis(&self, name: &str, value: f64) -> SweepBase {
        let mut base = *self;
        match name {
            "a" => base.a = Some(value),
            "r" => base.r = Some(value),
            "f" => base.f = Some(value),
            "l" => base.l = Some(value),
            "c" => base.c = Some(value),
            "p" => base.p = Some(value),
            _ => unreachable!("axis names validated at parse time"),
        }
        base
    }

    fn resolve(&self) -> CliResult<ResolvedParams> {
        resolve_params(self.design, self.a, self.r, self.f, self.l, self.c, self.p)
    }
}

/// Evaluates the cost ratio over up to two axes in lexicographic grid order.
pub fn run_sweep(base: &SweepBase, axes: &[Axis]) -> CliResult<Table> {
    if axes.is_empty() {
        return Err(CliError::usage("sweep needs at least one --axis"));
    }
    if axes.len() > 2 {
        return Err(CliError::usage("sweep supports at most 2 axes"));
    }
    // Validate the flag matrix once on a representative point; per-point
    // domain errors are handled in the loop below.
    {
        let mut probe = *base;
        for axis in axes {
            probe = probe.with_axis(&axis.name, axis.values[0]);
        }
        if let Err(CliError::Usage(msg)) = probe.resolve() {
            return Err(CliError::Usage(msg));
        }
    }

    let mut columns: Vec<String> = axes.iter().map(|a| a.name.clone()).collect();
    columns.push("cost_ratio".to_string());
    let mut rows = Vec::new();
    let mut skipped = Vec::new();

    let outer = &axes[0];
    let inner = axes.get(1);
    for &ov in &outer.values {
        let values: Vec<(Vec<f64>, SweepBase)> = match inner {
            Some(inner_axis) => inner_axis
                .values
                .iter()
                .map(|&iv| {
                    (
                        vec![ov, iv],
                        base.with_axis(&outer.name, ov).with_axis(&inner_axis.name, iv),
                    )
                })
                .collect(),
            None => vec![(vec![ov], base.with_axis(&outer.name, ov))],
        };
        for (coords, point) in values {
            match point.resolve().and_then(|p| p.cost_ratio()) {
                Ok(ratio) => {
                    let mut row = coords;
                    row.push(ratio);
                    rows.push(row);
                }
                Err(CliError::Usage(msg)) => return Err(CliError::Usage(msg)),
                Err(err) => skipped.push(format!("skipped point {coords:?}: {err}")),
            }
        }
    }
    Ok(Table {
        columns,
        rows,
        skipped,
    })
}

/// Bundled dataset presets. Each regenerates one model-curve family at the
/// reference operating point r=1, C=1000 (axes noted per preset).
pub const PRESET_NAMES: [&str; 7] = [
    "fig2a", "fig2b", "fig5a", "fig5b", "fig6a", "fig6b", "fig7b",
];

pub fn preset_table(name: &str) -> CliResult<Table> {
    match name {
        // Leveling cost ratio vs level count, one curve per merge
        // amplification, r=1, C=1000.
        "fig2a" => {
            let mut rows = Vec::new();
            for ai in 1..=10u32 {
                let a = ai as f64 / 10.0;
                for l in 1..=10u32 {
                    let f = 1000f64.powf(1.0 / l as f64);
                    rows.push(vec![a, l as f64, amplification_factor(a, f, l as f64)]);
                }
            }
            Ok(Table {
                columns: str_cols(&["a", "l", "cost_ratio"]),
                rows,
                skipped: Vec::new(),
            })
        }
        // Leveling cost ratio vs level count, one curve per achieved
        // throughput, a=1, C=1000.
        "fig2b" => {
            let mut rows = Vec::new();
            for r in [0.2, 0.4, 0.6, 0.8, 1.0] {
                for l in 1..=10u32 {
                    let f = 1000f64.powf(1.0 / l as f64);
                    rows.push(vec![r, l as f64, amplification_factor(1.0, f, l as f64) / r]);
                }
            }
            Ok(Table {
                columns: str_cols(&["r", "l", "cost_ratio"]),
                rows,
                skipped: Vec::new(),
            })
        }
        // Benefit of a value log over in-place values vs merge
        // amplification, f=10, C=1000 (l=3), p=0.01, r=1.
        "fig5a" => {
            let mut rows = Vec::new();
            let p = 0.01;
            for ai in 0..=20u32 {
                let a = ai as f64 / 20.0;
                let x = amplification_factor(a, 10.0, 3.0);
                let in_place = x;
                let with_log = (p * x + p + 1.0) / (p + 1.0);
                rows.push(vec![a, in_place / with_log]);
            }
            Ok(Table {
                columns: str_cols(&["a", "benefit"]),
                rows,
                skipped: Vec::new(),
            })
        }
        // Benefit of tiering over leveling vs merge amplification, f=10,
        // C=1000 (l=3), r=1.
        "fig5b" => {
            let mut rows = Vec::new();
            for ai in 0..=20u32 {
                let a = ai as f64 / 20.0;
                let leveling = amplification_factor(a, 10.0, 3.0);
                let tiering = 2.0 * 3.0 - 1.0;
                rows.push(vec![a, leveling / tiering]);
            }
            Ok(Table {
                columns: str_cols(&["a", "benefit"]),
                rows,
                skipped: Vec::new(),
            })
        }
        // Tiering cost ratio vs growth factor, C=1000, r=1.
        "fig6a" => {
            let mut rows = Vec::new();
            for f in 2..=64u32 {
                let l = 1000f64.ln() / (f as f64).ln();
                rows.push(vec![f as f64, 2.0 * l - 1.0]);
            }
            Ok(Table {
                columns: str_cols(&["f", "cost_ratio"]),
                rows,
                skipped: Vec::new(),
            })
        }
        // Tiering-with-log cost ratio vs growth factor, one curve per
        // key-to-value ratio, C=1000, r=1.
        "fig6b" => {
            let mut rows = Vec::new();
            for p in [0.01, 0.05, 0.1, 0.5, 1.0] {
                for f in 2..=64u32 {
                    let l = 1000f64.ln() / (f as f64).ln();
                    let ratio = (p * (2.0 * l - 1.0) + p + 1.0) / (p + 1.0);
                    rows.push(vec![p, f as f64, ratio]);
                }
            }
            Ok(Table {
                columns: str_cols(&["p", "f", "cost_ratio"]),
                rows,
                skipped: Vec::new(),
            })
        }
        // Leveling cost ratio vs level count at full merge amplification,
        // one curve per dataset-to-memory ratio, a=1, r=1.
        "fig7b" => {
            let mut rows = Vec::new();
            for c in [100.0f64, 1000.0, 10000.0, 100000.0] {
                for l in 1..=12u32 {
                    let f = c.powf(1.0 / l as f64);
                    rows.push(vec![c, l as f64, amplification_factor(1.0, f, l as f64)]);
                }
            }
            Ok(Table {
                columns: str_cols(&["c", "l", "cost_ratio"]),
                rows,
                skipped: Vec::new(),
            })
        }
        _ => Err(CliError::usage(format!(
            "unknown preset `{name}` (available: {})",
            PRESET_NAMES.join(", ")
        ))),
    }
}

fn str_cols(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Benefit-curve comparison of two designs over one axis.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ComparisonReport {
    pub baseline: DesignKind,
    pub alternative: DesignKind,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Analytic benefit limit `(p+1)/(2p+1)` as merge amplification
    /// vanishes and the store collapses to one level; present when exactly
    /// one side uses a value log.
    pub reference_limit: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub skipped: Vec<String>,
}

/// Applies an axis value to one side of a comparison, dropping knobs the
/// design does not understand (a for tiering, p without a log) so one axis
/// can drive two structurally different designs.
fn comparison_point(base: &SweepBase, axis: &str, value: f64) -> SweepBase {
    let mut point = base.with_axis(axis, value);
    if point.design.is_tiering() {
        point.a = None;
    }
    if !point.design.uses_log() {
        point.p = None;
    }
    point
}

pub fn run_compare(
    baseline: &SweepBase,
    alternative: &SweepBase,
    axis: &Axis,
) -> CliResult<ComparisonReport> {
    // Validate both flag matrices on the first grid point; per-point domain
    // errors are skipped in the loop below.
    for side in [baseline, alternative] {
        if let Err(CliError::Usage(msg)) = comparison_point(side, &axis.name, axis.values[0]).resolve() {
            return Err(CliError::Usage(msg));
        }
    }

    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for &v in &axis.values {
        let b = comparison_point(baseline, &axis.name, v).resolve().and_then(|p| p.cost_ratio());
        let a = comparison_point(alternative, &axis.name, v).resolve().and_then(|p| p.cost_ratio());
        match (b, a) {
            (Ok(b), Ok(a)) => rows.push(vec![v, b, a, b / a]),
            (Err(CliError::Usage(m)), _) | (_, Err(CliError::Usage(m))) => {
                return Err(CliError::Usage(m))
            }
            (Err(e), _) | (_, Err(e)) => skipped.push(format!("skipped {}={v}: {e}", axis.name)),
        }
    }

    let reference_limit = match (baseline.design.uses_log(), alternative.design.uses_log()) {
        (false, true) => alternative.p.map(|p| (p + 1.0) / (2.0 * p + 1.0)),
        (true, false) => baseline.p.map(|p| (2.0 * p + 1.0) / (p + 1.0)),
        _ => None,
    };

    Ok(ComparisonReport {
        baseline: baseline.design,
        alternative: alternative.design,
        columns: str_cols(&[&axis.name, "baseline", "alternative", "benefit"]),
        rows,
        reference_limit,
        skipped,
    })
}

impl ComparisonReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|v| format_cell(*v)).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        if let Some(limit) = self.reference_limit {
            out.push_str(&format!(
                "# reference: benefit limit at a->0, l=1 is {}\n",
                format_cell(limit)
            ));
        }
        out
    }
}
