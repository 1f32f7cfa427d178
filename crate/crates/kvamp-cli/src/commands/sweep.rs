//! `kvamp sweep`: tabular datasets over parameter grids.

use crate::cli::{OutputFormat, SweepArgs};
use crate::error::{CliError, CliResult};
use crate::fileconf::FileConfig;
use crate::output::to_json_string;
use crate::params::design_kind;
use crate::sweep::{parse_axis, preset_table, run_sweep, SweepBase, Table};

pub fn run(conf: &FileConfig, args: &SweepArgs, format: OutputFormat) -> CliResult<String> {
    let table = build_table(conf, args)?;
    for note in &table.skipped {
        eprintln!("{note}");
    }
    match format {
        OutputFormat::Csv | OutputFormat::Text => Ok(table.to_csv()),
        OutputFormat::Json => to_json_string(&table),
    }
}

pub fn build_table(conf: &FileConfig, args: &SweepArgs) -> CliResult<Table> {
    if let Some(preset) = args.preset.as_deref().or(conf.raw("preset")) {
        if !args.axes.is_empty() {
            return Err(CliError::usage("--preset and --axis are mutually exclusive"));
        }
        return preset_table(preset);
    }

    let design_name = args
        .design
        .clone()
        .or_else(|| conf.string("design"))
        .unwrap_or_else(|| "leveling".to_string());
    let log = args.log || conf.bool("log")?.unwrap_or(false);
    let design = design_kind(&design_name, log)?;

    let base = SweepBase {
        design,
        a: args.a.or(conf.f64("a")?),
        r: args.r.or(conf.f64("r")?),
        f: args.f.or(conf.f64("f")?),
        l: args.l.or(conf.f64("l")?),
        c: args.c.or(conf.f64("c")?),
        p: args.p.or(conf.f64("p")?),
    };
    let axes = args
        .axes
        .iter()
        .map(|spec| parse_axis(spec))
        .collect::<CliResult<Vec<_>>>()?;
    run_sweep(&base, &axes)
}
