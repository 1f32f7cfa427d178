//! `kvamp compare`: benefit-ratio curves between two designs.

use crate::cli::{CompareArgs, OutputFormat};
use crate::error::CliResult;
use crate::fileconf::FileConfig;
use crate::output::to_json_string;
use crate::params::design_kind_combined;
use crate::sweep::{parse_axis, run_compare, SweepBase};

pub fn run(conf: &FileConfig, args: &CompareArgs, format: OutputFormat) -> CliResult<String> {
    let baseline_design = design_kind_combined(&args.baseline)?;
    let alternative_design = design_kind_combined(&args.alternative)?;

    let shared = SweepBase {
        design: baseline_design,
        a: args.a.or(conf.f64("a")?),
        r: args.r.or(conf.f64("r")?),
        f: args.f.or(conf.f64("f")?),
        l: args.l.or(conf.f64("l")?),
        c: args.c.or(conf.f64("c")?),
        p: args.p.or(conf.f64("p")?),
    };
    // Each side keeps only the knobs its design understands.
    let baseline = prune(shared, baseline_design);
    let alternative = prune(shared, alternative_design);

    let axis = parse_axis(&args.axis)?;
    let report = run_compare(&baseline, &alternative, &axis)?;
    for note in &report.skipped {
        eprintln!("{note}");
    }
    match format {
        OutputFormat::Csv | OutputFormat::Text => Ok(report.to_csv()),
        OutputFormat::Json => to_json_string(&report),
    }
}

fn prune(mut base: SweepBase, design: kvamp_core::DesignKind) -> SweepBase {
    base.design = design;
    if design.is_tiering() {
        base.a = None;
    }
    if !design.uses_log() {
        base.p = None;
    }
    base
}
