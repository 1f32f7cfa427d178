//! Shared resolution of design flags and model parameters.

use kvamp_core::{DesignKind, ModelParams};

use crate::error::{CliError, CliResult};

/// The supported flag matrix, printed with every combination error.
pub const DESIGN_MATRIX: &str = "\
supported design/flag combinations:
  design    --log  required flags        cost ratio
  leveling  no     --a --r               (2l-1-a*l+a*f*l)/r
  leveling  yes    --a --r --p           (p*(2l-1-a*l+a*f*l)+p+1)/(r*(p+1))
  tiering   no     --r   (--a excluded)  (2l-1)/r
  tiering   yes    --r --p (--a excluded)(p*(2l-1)+p+1)/(r*(p+1))
plus exactly two of --f/--l/--c (the third is derived from f^l = c)";

pub fn design_kind(design: &str, log: bool) -> CliResult<DesignKind> {
    match (design, log) {
        ("leveling", false) => Ok(DesignKind::Leveling),
        ("leveling", true) => Ok(DesignKind::LevelingLog),
        ("tiering", false) => Ok(DesignKind::Tiering),
        ("tiering", true) => Ok(DesignKind::TieringLog),
        _ => Err(CliError::usage(format!(
            "unknown design `{design}`\n{DESIGN_MATRIX}"
        ))),
    }
}

/// Parses combined names like "leveling-log" used by `compare`.
pub fn design_kind_combined(name: &str) -> CliResult<DesignKind> {
    match name {
        "leveling" => Ok(DesignKind::Leveling),
        "leveling-log" => Ok(DesignKind::LevelingLog),
        "tiering" => Ok(DesignKind::Tiering),
        "tiering-log" => Ok(DesignKind::TieringLog),
        _ => Err(CliError::usage(format!(
            "unknown design `{name}` (expected leveling, leveling-log, tiering, or tiering-log)\n{DESIGN_MATRIX}"
        ))),
    }
}

/// Resolves `f`, `l`, `c` from whichever two were supplied (all three are
/// accepted when consistent).
pub fn resolve_geometry(f: Option<f64>, l: Option<f64>, c: Option<f64>) -> CliResult<(f64, f64, f64)> {
    match (f, l, c) {
        (Some(f), Some(l), None) => Ok((f, l, powf(f, l))),
        (Some(f), None, Some(c)) => {
            if f <= 1.0 {
                return Err(CliError::Domain("growth factor must be > 1".into()));
            }
            Ok((f, snap(c.ln() / f.ln(), |l| powf(f, l), c), c))
        }
        (None, Some(l), Some(c)) => {
            if l < 1.0 {
                return Err(CliError::Domain("level count must be >= 1".into()));
            }
            Ok((snap(powf(c, 1.0 / l), |f| powf(f, l), c), l, c))
        }
        (Some(f), Some(l), Some(c)) => {
            let implied = powf(f, l);
            if (implied - c).abs() > 1e-6 * c.abs() {
                return Err(CliError::usage(format!(
                    "inconsistent geometry: f^l = {implied} but c = {c}; supply two of --f/--l/--c"
                )));
            }
            Ok((f, l, c))
        }
        _ => Err(CliError::usage(format!(
            "need exactly two of --f/--l/--c\n{DESIGN_MATRIX}"
        ))),
    }
}

fn powf(base: f64, exp: f64) -> f64 {
    base.powf(exp)
}

/// Rounds a derived geometry value to the nearest integer when that restores
/// `f^l = c` within 1e-9 relative, absorbing logarithm rounding noise
/// (e.g. log_10(1000) = 2.9999999999999996).
fn snap(value: f64, check: impl Fn(f64) -> f64, c: f64) -> f64 {
    let rounded = value.round();
    if rounded >= 1.0 && (check(rounded) - c).abs() <= 1e-9 * c.abs() {
        rounded
    } else {
        value
    }
}

/// Fully resolved analytic parameters for one design.
///
/// Tiering costs do not depend on the growth factor, so `f` and `c` stay
/// `None` when a tiering invocation supplies only `--l`.
#[derive(Debug, Clone, Copy)]
pub struct ResolvedParams {
    pub design: DesignKind,
    pub a: f64,
    pub r: f64,
    pub f: Option<f64>,
    pub l: f64,
    pub c: Option<f64>,
    pub p: Option<f64>,
}

impl ResolvedParams {
    pub fn model_params(&self) -> CliResult<ModelParams> {
        let f = self.f.ok_or_else(|| {
            CliError::usage(format!("this design needs a growth factor\n{DESIGN_MATRIX}"))
        })?;
        // Tiering ignores a; the shared validator still wants it in range.
        let a = if self.design.is_tiering() { 0.0 } else { self.a };
        let params = ModelParams {
            a,
            r: self.r,
            f,
            l: self.l,
            c: self.c.unwrap_or_else(|| f.powf(self.l)),
            p: self.p,
        };
        params.validate().map_err(CliError::from)?;
        Ok(params)
    }

    pub fn cost_ratio(&self) -> CliResult<f64> {
        match self.design {
            DesignKind::Tiering => Ok(kvamp_core::model::cost_ratio_tiering(self.r, self.l)?),
            DesignKind::TieringLog => {
                let p = self.p.expect("validated by resolve_params");
                Ok(kvamp_core::model::cost_ratio_tiering_log_parts(self.r, self.l, p)?)
            }
            DesignKind::Leveling | DesignKind::LevelingLog => {
                Ok(self.model_params()?.cost_ratio(self.design)?)
            }
        }
    }
}

/// Validates the flag matrix and assembles the parameters.
#[allow(clippy::too_many_arguments)]
pub fn resolve_params(
    design: DesignKind,
    a: Option<f64>,
    r: Option<f64>,
    f: Option<f64>,
    l: Option<f64>,
    c: Option<f64>,
    p: Option<f64>,
) -> CliResult<ResolvedParams> {
    if design.is_tiering() && a.is_some() {
        return Err(CliError::usage(format!(
            "--a has no effect under tiering (merges never touch the target level)\n{DESIGN_MATRIX}"
        )));
    }
    if design.uses_log() && p.is_none() {
        return Err(CliError::usage(format!(
            "--log requires --p (the key-to-value size ratio)\n{DESIGN_MATRIX}"
        )));
    }
    if !design.uses_log() && p.is_some() {
        return Err(CliError::usage(format!(
            "--p only applies to value-log designs (add --log)\n{DESIGN_MATRIX}"
        )));
    }
    if !design.is_tiering() && a.is_none() {
        return Err(CliError::usage(format!(
            "leveling requires --a (the merge-amplification fraction)\n{DESIGN_MATRIX}"
        )));
    }
    // Tiering needs only the level count; a growth factor pair is accepted
    // to derive it.
    let (f, l, c) = if design.is_tiering() && f.is_none() && c.is_none() {
        let l = l.ok_or_else(|| {
            CliError::usage(format!("tiering needs --l or two of --f/--l/--c\n{DESIGN_MATRIX}"))
        })?;
        (None, l, None)
    } else {
        let (f, l, c) = resolve_geometry(f, l, c)?;
        (Some(f), l, Some(c))
    };
    Ok(ResolvedParams {
        design,
        a: a.unwrap_or(0.0),
        r: r.unwrap_or(1.0),
        f,
        l,
        c,
        p,
    })
}
