//! `kvamp optimize`: level-count and growth-factor optimization.

use kvamp_core::optimize::{
    growth_schedule_constant_total, growth_schedule_from_anchor, lambert_w0, minimize_cost_ratio,
    optimal_levels_constant_c_exact, optimal_levels_simplified,
};
use serde::Serialize;

use crate::cli::{ConstraintKind, OptimizeArgs, OutputFormat};
use crate::error::{CliError, CliResult};
use crate::fileconf::FileConfig;
use crate::output::to_json_string;
use crate::params::design_kind;
use crate::sweep::format_cell;
use crate::units::parse_size;

pub fn run(conf: &FileConfig, args: &OptimizeArgs, format: OutputFormat) -> CliResult<String> {
    let constraint = args.constraint.unwrap_or(ConstraintKind::DramRatio);
    match constraint {
        ConstraintKind::TotalSize => run_total_size(conf, args, format),
        ConstraintKind::DramRatio => {
            if args.simplified {
                run_simplified(conf, args, format)
            } else if args.exact {
                run_exact(conf, args, format)
            } else {
                run_scan(conf, args, format)
            }
        }
    }
}

fn require_c(conf: &FileConfig, args: &OptimizeArgs) -> CliResult<f64> {
    args.c
        .or(conf.f64("c")?)
        .ok_or_else(|| CliError::usage("--c (dataset-to-memory ratio) is required"))
}

fn run_scan(conf: &FileConfig, args: &OptimizeArgs, format: OutputFormat) -> CliResult<String> {
    let design_name = args
        .design
        .clone()
        .or_else(|| conf.string("design"))
        .unwrap_or_else(|| "leveling".to_string());
    let log = args.log || conf.bool("log")?.unwrap_or(false);
    let design = design_kind(&design_name, log)?;
    let c = require_c(conf, args)?;
    let a = args.a.or(conf.f64("a")?).unwrap_or(0.0);
    let r = args.r.or(conf.f64("r")?).unwrap_or(1.0);
    let p = args.p.or(conf.f64("p")?);
    if design.is_tiering() && args.a.is_some() {
        return Err(CliError::usage("--a has no effect under tiering"));
    }
    if !design.is_tiering() && args.a.or(conf.f64("a")?).is_none() {
        return Err(CliError::usage("leveling requires --a"));
    }
    if design.uses_log() && p.is_none() {
        return Err(CliError::usage("--log requires --p"));
    }

    let result = minimize_cost_ratio(design, a, r, p, c, args.l_min..=args.l_max)?;

    match format {
        OutputFormat::Json => to_json_string(&result),
        OutputFormat::Csv => {
            let mut out = String::from("levels,growth,objective\n");
            for pt in &result.curve {
                out.push_str(&format!(
                    "{},{},{}\n",
                    pt.levels,
                    format_cell(pt.growth),
                    format_cell(pt.objective)
                ));
            }
            Ok(out)
        }
        OutputFormat::Text => {
            let mut out = String::new();
            out.push_str(&format!("design = {design}\n"));
            out.push_str(&format!("constraint = dram-ratio (c = {c})\n"));
            out.push_str(&format!("optimal_levels = {}\n", result.levels));
            out.push_str(&format!("growth = {}\n", result.growth));
            out.push_str(&format!("objective = {}\n", result.objective));
            out.push_str(&format!("real_optimum_levels = {}\n", result.levels_real));
            out.push_str("curve (levels, growth, objective):\n");
            for pt in &result.curve {
                out.push_str(&format!(
                    "  {:>3}  {:>12}  {:>12}\n",
                    pt.levels,
                    format_cell(pt.growth),
                    format_cell(pt.objective)
                ));
            }
            Ok(out)
        }
    }
}

#[derive(Debug, Serialize)]
struct SimplifiedResult {
    c: f64,
    levels: f64,
    growth: f64,
}

fn run_simplified(conf: &FileConfig, args: &OptimizeArgs, format: OutputFormat) -> CliResult<String> {
    let c = require_c(conf, args)?;
    let (levels, growth) = optimal_levels_simplified(c)?;
    let result = SimplifiedResult { c, levels, growth };
    match format {
        OutputFormat::Json => to_json_string(&result),
        _ => Ok(format!(
            "constraint = dram-ratio (c = {c})\nsimplified optimum: l = ln(c)\noptimal_levels = {levels}\noptimal_growth = {growth} (e)\n"
        )),
    }
}

#[derive(Debug, Serialize)]
struct ExactResult {
    c: f64,
    lambert_w_1_over_e: f64,
    residual: f64,
    levels: f64,
    growth: f64,
    rounded_variant_levels: f64,
    rounded_variant_growth: f64,
    note: String,
}

fn run_exact(conf: &FileConfig, args: &OptimizeArgs, format: OutputFormat) -> CliResult<String> {
    let c = require_c(conf, args)?;
    let w = lambert_w0(1.0 / std::f64::consts::E)?;
    let (levels, growth) = optimal_levels_constant_c_exact(c)?;
    let rounded_levels = c.ln() / 1.5;
    let rounded_growth = (1.5f64).exp();
    let note = format!(
        "W(1/e) is sometimes rounded to 0.5, which gives l = ln(c)/1.5 = {rounded_levels:.4} and \
         f = e^1.5 = {rounded_growth:.4}; the exact principal-branch value {:.6} gives the \
         optimum above. Both variants are reported.",
        w.w0
    );
    let result = ExactResult {
        c,
        lambert_w_1_over_e: w.w0,
        residual: w.residual,
        levels,
        growth,
        rounded_variant_levels: rounded_levels,
        rounded_variant_growth: rounded_growth,
        note,
    };
    match format {
        OutputFormat::Json => to_json_string(&result),
        _ => Ok(format!(
            "constraint = dram-ratio (c = {c})\n\
             lambert_w_1_over_e = {}\n\
             residual = {:e}\n\
             optimal_levels = {}\n\
             optimal_growth = {}\n\
             rounded_variant_levels = {}\n\
             rounded_variant_growth = {}\n\
             note: {}\n",
            result.lambert_w_1_over_e,
            result.residual,
            result.levels,
            result.growth,
            result.rounded_variant_levels,
            result.rounded_variant_growth,
            result.note
        )),
    }
}

fn run_total_size(conf: &FileConfig, args: &OptimizeArgs, format: OutputFormat) -> CliResult<String> {
    let levels = args
        .levels
        .or(conf.u32("levels")?)
        .ok_or_else(|| CliError::usage("--constraint total-size requires --levels"))?;
    let anchor = args.anchor_last_growth.or(conf.f64("anchor_last_growth")?);
    let s0 = match &args.s0 {
        Some(s) => Some(parse_size(s)?),
        None => conf.size("s0")?,
    };
    let schedule = match anchor {
        Some(f_last) => growth_schedule_from_anchor(levels, f_last, s0.unwrap_or(1) as f64)?,
        None => {
            let total = match &args.total_bytes {
                Some(s) => parse_size(s)?,
                None => conf
                    .size("total_bytes")?
                    .ok_or_else(|| CliError::usage("--constraint total-size needs --anchor-last-growth or --total-bytes with --s0"))?,
            };
            let s0 = s0.ok_or_else(|| CliError::usage("--total-bytes requires --s0"))?;
            growth_schedule_constant_total(levels, total, s0)?
        }
    };

    match format {
        OutputFormat::Json => to_json_string(&schedule),
        _ => {
            let factors: Vec<String> = schedule.factors.iter().map(|f| format!("{f:.4}")).collect();
            Ok(format!(
                "constraint = total-size\nlevels = {}\nfactors = {}\ncapacity_sum = {}\nlagrange_multiplier = {:e}\nrecurrence_residual = {:e}\n",
                schedule.levels(),
                factors.join(", "),
                schedule.capacity_sum(),
                schedule.lagrange_multiplier,
                schedule.recurrence_residual()
            ))
        }
    }
}
