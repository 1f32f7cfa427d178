//! `kvamp eval`: one design, one operating point.

use kvamp_core::DesignKind;
use serde::Serialize;

use crate::cli::{EvalArgs, OutputFormat};
use crate::error::{CliError, CliResult};
use crate::fileconf::FileConfig;
use crate::output::to_json_string;
use crate::params::{design_kind, resolve_params, ResolvedParams};
use crate::sweep::format_cell;
use crate::units::parse_size;

#[derive(Debug, Serialize)]
pub struct EvalResult {
    pub design: DesignKind,
    pub a: f64,
    pub r: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f: Option<f64>,
    pub l: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    pub cost_ratio: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sl_bytes: Option<u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub traffic_bytes: Option<f64>,
}

pub fn evaluate(params: &ResolvedParams, sl_bytes: Option<u128>) -> CliResult<EvalResult> {
    let cost_ratio = params.cost_ratio()?;
    let traffic_bytes = sl_bytes.map(|sl| traffic_for(params, sl as f64));
    Ok(EvalResult {
        design: params.design,
        a: params.a,
        r: params.r,
        f: params.f,
        l: params.l,
        c: params.c,
        p: params.p,
        cost_ratio,
        sl_bytes,
        traffic_bytes,
    })
}

/// Total traffic `D` implied by the design at a given dataset size.
fn traffic_for(params: &ResolvedParams, sl: f64) -> f64 {
    let x = match params.design {
        DesignKind::Leveling | DesignKind::LevelingLog => {
            let f = params.f.expect("leveling always resolves a growth factor");
            2.0 * params.l - 1.0 - params.a * params.l + params.a * f * params.l
        }
        DesignKind::Tiering | DesignKind::TieringLog => 2.0 * params.l - 1.0,
    };
    if params.design.uses_log() {
        let p = params.p.expect("validated");
        let kl = sl * p / (p + 1.0);
        kl * x + sl
    } else {
        sl * x
    }
}

pub fn run(conf: &FileConfig, args: &EvalArgs, format: OutputFormat) -> CliResult<String> {
    // A system preset seeds design, a, r, and f; flags and config entries
    // both override it.
    let preset = match args.system.as_deref().or(conf.raw("system")) {
        Some(name) => Some(kvamp_core::calibrate::preset(name).ok_or_else(|| {
            CliError::usage(format!(
                "unknown system `{name}` (available: RocksDB, Kreon, BlobDB, PebblesDB)"
            ))
        })?),
        None => None,
    };

    let log = args.log || conf.bool("log")?.unwrap_or(false);
    let design = match (args.design.clone().or_else(|| conf.string("design")), &preset) {
        (Some(name), _) => design_kind(&name, log)?,
        (None, Some(preset)) => {
            if log {
                // --log upgrades an in-place preset to its value-log form.
                design_kind(if preset.design.is_tiering() { "tiering" } else { "leveling" }, true)?
            } else {
                preset.design
            }
        }
        (None, None) => design_kind("leveling", log)?,
    };

    // Tiering takes no merge-amplification knob, so a preset's `a` is only
    // forwarded when the resolved design is a leveling one.
    let preset_a = preset
        .as_ref()
        .and_then(|p| (!design.is_tiering()).then_some(p.a));
    let params = resolve_params(
        design,
        args.a.or(conf.f64("a")?).or(preset_a),
        args.r.or(conf.f64("r")?).or(preset.as_ref().map(|p| p.r)),
        args.f
            .or(conf.f64("f")?)
            .or(preset.as_ref().map(|p| p.growth as f64)),
        args.l.or(conf.f64("l")?),
        args.c.or(conf.f64("c")?),
        args.p.or(conf.f64("p")?),
    )?;

    let sl_flag = match &args.sl {
        Some(s) => Some(parse_size(s)?),
        None => conf.size("sl")?,
    };
    let s0_flag = match &args.s0 {
        Some(s) => Some(parse_size(s)?),
        None => conf.size("s0")?,
    };
    let sl_bytes = match (sl_flag, s0_flag) {
        (Some(sl), _) => Some(sl),
        (None, Some(s0)) => match params.c {
            Some(c) => Some((s0 as f64 * c) as u128),
            None => {
                return Err(CliError::usage(
                    "--s0 needs a dataset-to-memory ratio (give --c or --f) to derive --sl",
                ))
            }
        },
        (None, None) => None,
    };

    let result = evaluate(&params, sl_bytes)?;
    render(&result, format)
}

pub fn render(result: &EvalResult, format: OutputFormat) -> CliResult<String> {
    match format {
        OutputFormat::Json => to_json_string(result),
        OutputFormat::Csv => {
            let mut cols = vec!["design", "a", "r", "l"];
            let mut row = vec![
                result.design.name().to_string(),
                format_cell(result.a),
                format_cell(result.r),
                format_cell(result.l),
            ];
            if let Some(f) = result.f {
                cols.push("f");
                row.push(format_cell(f));
            }
            if let Some(c) = result.c {
                cols.push("c");
                row.push(format_cell(c));
            }
            if let Some(p) = result.p {
                cols.push("p");
                row.push(format_cell(p));
            }
            cols.push("cost_ratio");
            row.push(format_cell(result.cost_ratio));
            if let Some(d) = result.traffic_bytes {
                cols.push("traffic_bytes");
                row.push(format_cell(d));
            }
            Ok(format!("{}\n{}\n", cols.join(","), row.join(",")))
        }
        OutputFormat::Text => {
            let mut out = String::new();
            out.push_str(&format!("design = {}\n", result.design));
            out.push_str(&format!("a = {}\n", result.a));
            out.push_str(&format!("r = {}\n", result.r));
            if let Some(f) = result.f {
                out.push_str(&format!("f = {f}\n"));
            }
            out.push_str(&format!("l = {}\n", result.l));
            if let Some(c) = result.c {
                out.push_str(&format!("c = {c}\n"));
            }
            if let Some(p) = result.p {
                out.push_str(&format!("p = {p}\n"));
            }
            out.push_str(&format!("cost_ratio = {}\n", result.cost_ratio));
            if let (Some(sl), Some(d)) = (result.sl_bytes, result.traffic_bytes) {
                out.push_str(&format!("sl_bytes = {sl}\n"));
                out.push_str(&format!("traffic_bytes = {d}\n"));
            }
            Ok(out)
        }
    }
}
