//! Closed-form and summation-form insert-path traffic models for multi-level
//! key-value stores.
//!
//! The model family covers four designs — leveling or tiering compaction,
//! each with values kept in place or separated into an append-only value log —
//! plus a per-SST compaction variant in which levels stay near-full.
//!
//! Two quantities are computed throughout:
//!
//! - **Traffic `D`**: total device bytes read and written until a dataset of
//!   `S_l` bytes has settled in the last level. For a store with growth
//!   factor `f` and `l` on-device levels, leveling costs
//!   `D = S_l * (2l - 1 - a*l + a*f*l)`, where `a` in `[0, 1]` is the
//!   fraction of the lower level rewritten per merge.
//! - **Cost ratio `T/T_opt`**: `D / (r * S_l)`, the slowdown against writing
//!   the dataset once at full device throughput, where `r` in `(0, 1]` is the
//!   fraction of sequential throughput the store's I/O unit size achieves.
//!
//! Every closed form has a summation-form twin (`*_sum`) that evaluates the
//! underlying per-merge double summation literally in exact rational
//! arithmetic. The two must agree exactly on integral geometries; the
//! summation forms are deliberately naive so they can serve as oracles for
//! the algebra.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::rational::Rational;

/// Relative tolerance for `f^l = C` consistency when all three are supplied.
pub const GEOMETRY_CONSISTENCY_RTOL: f64 = 1e-6;

/// One of the four modeled store designs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum DesignKind {
    /// Leveling compaction, values stored in place with keys.
    Leveling,
    /// Leveling compaction, values in an append-only log; only keys level.
    LevelingLog,
    /// Tiering compaction, values in place.
    Tiering,
    /// Tiering compaction, values in a log.
    TieringLog,
}

impl DesignKind {
    pub fn uses_log(&self) -> bool {
        matches!(self, DesignKind::LevelingLog | DesignKind::TieringLog)
    }

    pub fn is_tiering(&self) -> bool {
        matches!(self, DesignKind::Tiering | DesignKind::TieringLog)
    }

    pub fn name(&self) -> &'static str {
        match self {
            DesignKind::Leveling => "leveling",
            DesignKind::LevelingLog => "leveling-log",
            DesignKind::Tiering => "tiering",
            DesignKind::TieringLog => "tiering-log",
        }
    }
}

impl core::fmt::Display for DesignKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

/// The analytic knobs shared by every closed form.
///
/// `l` is a positive real here: the analytic forms are routinely evaluated at
/// `l = log_f C`, which is rarely an integer. Simulators take integer level
/// counts instead.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ModelParams {
    /// Merge amplification: fraction of the lower level read and written per
    /// merge, in `[0, 1]`.
    pub a: f64,
    /// Achieved fraction of sequential device throughput, in `(0, 1]`.
    pub r: f64,
    /// Growth factor between consecutive levels, `> 1`.
    pub f: f64,
    /// Number of on-device levels, `>= 1` (real-valued).
    pub l: f64,
    /// Dataset-to-memory ratio `S_l / S_0`, `> 1`.
    pub c: f64,
    /// Key-to-value size ratio `K_l / V_l`, `> 0`; required by log designs.
    pub p: Option<f64>,
}

impl ModelParams {
    /// Builds params from `f` and `l`, deriving `c = f^l`.
    pub fn from_growth_levels(a: f64, r: f64, f: f64, l: f64) -> Result<Self> {
        let params = ModelParams {
            a,
            r,
            f,
            l,
            c: math::powf(f, l),
            p: None,
        };
        params.validate()?;
        Ok(params)
    }

    /// Builds params from `f` and `c`, deriving `l = log_f c`.
    pub fn from_growth_ratio(a: f64, r: f64, f: f64, c: f64) -> Result<Self> {
        if f <= 1.0 {
            return Err(Error::param("f", "growth factor must be > 1"));
        }
        let params = ModelParams {
            a,
            r,
            f,
            l: math::ln(c) / math::ln(f),
            c,
            p: None,
        };
        params.validate()?;
        Ok(params)
    }

    /// Builds params from `l` and `c`, deriving `f = c^(1/l)`.
    pub fn from_levels_ratio(a: f64, r: f64, l: f64, c: f64) -> Result<Self> {
        if l < 1.0 {
            return Err(Error::param("l", "level count must be >= 1"));
        }
        let params = ModelParams {
            a,
            r,
            f: math::powf(c, 1.0 / l),
            l,
            c,
            p: None,
        };
        params.validate()?;
        Ok(params)
    }

    /// Builds params from all three of `f`, `l`, `c`, requiring consistency
    /// `f^l = c` within [`GEOMETRY_CONSISTENCY_RTOL`].
    pub fn from_all(a: f64, r: f64, f: f64, l: f64, c: f64) -> Result<Self> {
        let implied = math::powf(f, l);
        if !((implied - c).abs() <= GEOMETRY_CONSISTENCY_RTOL * c.abs()) {
            return Err(Error::param(
                "c",
                format!("f^l = {implied} does not match c = {c} within relative 1e-6"),
            ));
        }
        let params = ModelParams { a, r, f, l, c, p: None };
        params.validate()?;
        Ok(params)
    }

    pub fn with_key_value_ratio(mut self, p: f64) -> Result<Self> {
        if !(p > 0.0) {
            return Err(Error::param("p", "key-to-value ratio must be > 0"));
        }
        self.p = Some(p);
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.a) {
            return Err(Error::param("a", "merge amplification must be in [0, 1]"));
        }
        if !(self.r > 0.0 && self.r <= 1.0) {
            return Err(Error::param("r", "achieved throughput must be in (0, 1]"));
        }
        if !(self.f > 1.0) {
            return Err(Error::param("f", "growth factor must be > 1"));
        }
        if !(self.l >= 1.0) {
            return Err(Error::param("l", "level count must be >= 1"));
        }
        if !(self.c > 1.0) {
            return Err(Error::param("c", "dataset-to-memory ratio must be > 1"));
        }
        if let Some(p) = self.p {
            if !(p > 0.0) {
                return Err(Error::param("p", "key-to-value ratio must be > 0"));
            }
        }
        Ok(())
    }

    fn require_p(&self) -> Result<f64> {
        self.p
            .ok_or_else(|| Error::param("p", "key-to-value ratio required for log designs"))
    }

    /// Cost ratio of the given design at these parameters.
    pub fn cost_ratio(&self, design: DesignKind) -> Result<f64> {
        match design {
            DesignKind::Leveling => cost_ratio_basic(self),
            DesignKind::LevelingLog => cost_ratio_log(self),
            DesignKind::Tiering => cost_ratio_tiering(self.r, self.l),
            DesignKind::TieringLog => cost_ratio_tiering_log(self),
        }
    }
}

/// Byte-level level geometry: sizes `S_0..S_l`, plus optional SST size and
/// key/value split of the last level.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SizeLayout {
    level_sizes: Vec<u128>,
    sst_bytes: Option<u128>,
    key_bytes: Option<u128>,
}

impl SizeLayout {
    /// Builds the geometric layout `S_i = s0 * f^i` for `i = 0..=l`.
    pub fn uniform(s0_bytes: u128, f: u64, levels: u32) -> Result<Self> {
        if s0_bytes == 0 {
            return Err(Error::Geometry("S_0 must be positive".into()));
        }
        if f < 2 {
            return Err(Error::param("f", "integer growth factor must be >= 2"));
        }
        if levels < 1 {
            return Err(Error::param("l", "level count must be >= 1"));
        }
        let mut sizes = Vec::with_capacity(levels as usize + 1);
        let mut size = s0_bytes;
        sizes.push(size);
        for _ in 0..levels {
            size = size.checked_mul(f as u128).ok_or(Error::Overflow)?;
            sizes.push(size);
        }
        Ok(SizeLayout {
            level_sizes: sizes,
            sst_bytes: None,
            key_bytes: None,
        })
    }

    /// Builds a layout from explicit level sizes `S_0..S_l`.
    pub fn from_sizes(level_sizes: Vec<u128>) -> Result<Self> {
        if level_sizes.len() < 2 {
            return Err(Error::Geometry("need at least S_0 and S_1".into()));
        }
        for w in level_sizes.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::Geometry("level sizes must be strictly increasing".into()));
            }
        }
        Ok(SizeLayout {
            level_sizes,
            sst_bytes: None,
            key_bytes: None,
        })
    }

    pub fn with_sst_bytes(mut self, sst_bytes: u128) -> Result<Self> {
        if sst_bytes == 0 || sst_bytes > self.s0_bytes() {
            return Err(Error::Geometry("SST size must be in 1..=S_0".into()));
        }
        self.sst_bytes = Some(sst_bytes);
        Ok(self)
    }

    /// Declares the key/value split of the last level (`K_l + V_l = S_l`).
    pub fn with_key_split(mut self, kl_bytes: u128) -> Result<Self> {
        if kl_bytes >= self.sl_bytes() {
            return Err(Error::Geometry("key bytes must be smaller than S_l".into()));
        }
        self.key_bytes = Some(kl_bytes);
        Ok(self)
    }

    pub fn s0_bytes(&self) -> u128 {
        self.level_sizes[0]
    }

    pub fn sl_bytes(&self) -> u128 {
        *self.level_sizes.last().unwrap()
    }

    pub fn levels(&self) -> u32 {
        (self.level_sizes.len() - 1) as u32
    }

    pub fn level_sizes(&self) -> &[u128] {
        &self.level_sizes
    }

    pub fn sst_bytes(&self) -> Option<u128> {
        self.sst_bytes
    }

    pub fn kl_bytes(&self) -> Option<u128> {
        self.key_bytes
    }

    pub fn vl_bytes(&self) -> Option<u128> {
        self.key_bytes.map(|k| self.sl_bytes() - k)
    }

    /// Checks `S_{i+1} = f * S_i` for all levels.
    fn require_uniform_growth(&self, f: u64) -> Result<()> {
        if f < 2 {
            return Err(Error::param("f", "integer growth factor must be >= 2"));
        }
        for (i, w) in self.level_sizes.windows(2).enumerate() {
            if w[0].checked_mul(f as u128) != Some(w[1]) {
                return Err(Error::Geometry(format!(
                    "S_{}/S_{} is not the stated growth factor {f}",
                    i + 1,
                    i
                )));
            }
        }
        Ok(())
    }
}

/// Total traffic for a dataset plus its throughput-normalized cost ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrafficEstimate {
    /// Total device traffic `D` in bytes.
    pub d_bytes: f64,
    /// `D / (r * S_l)`.
    pub cost_ratio: f64,
}

impl TrafficEstimate {
    pub fn new(d_bytes: f64, sl_bytes: f64, r: f64) -> Result<Self> {
        if d_bytes < sl_bytes {
            // At the very least the dataset itself is written once.
            return Err(Error::Geometry(format!(
                "traffic {d_bytes} below the dataset size {sl_bytes}"
            )));
        }
        Ok(TrafficEstimate {
            d_bytes,
            cost_ratio: cost_ratio_from_bytes(d_bytes, sl_bytes, r)?,
        })
    }
}

/// Inputs for the page-rate form of the classic multi-level insert cost.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LsmParams {
    /// Incoming byte rate `R` (bytes/second).
    pub rate_r: f64,
    /// Page size `S_p` (bytes/page).
    pub page_bytes: f64,
    /// Per-level growth factors `f_1..f_l`, each `> 1`.
    pub growth_factors: Vec<f64>,
}

impl LsmParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.rate_r > 0.0) {
            return Err(Error::param("rate_r", "rate must be > 0"));
        }
        if !(self.page_bytes > 0.0) {
            return Err(Error::param("page_bytes", "page size must be > 0"));
        }
        if self.growth_factors.is_empty() {
            return Err(Error::Empty("growth_factors"));
        }
        if self.growth_factors.iter().any(|f| !(*f > 1.0)) {
            return Err(Error::param("growth_factors", "every factor must be > 1"));
        }
        Ok(())
    }

    pub fn levels(&self) -> usize {
        self.growth_factors.len()
    }
}

/// The shared amplification polynomial `2l - 1 - a*l + a*f*l`.
pub fn amplification_factor(a: f64, f: f64, l: f64) -> f64 {
    2.0 * l - 1.0 - a * l + a * f * l
}

/// Same polynomial in exact rational arithmetic (integer `l`, integer `f`).
fn amplification_factor_exact(a: &Rational, f: u64, l: u32) -> Result<Rational> {
    // 2l - 1 + a*l*(f - 1): rearranged so no intermediate goes negative.
    let base = Rational::from_int(2 * l as i128 - 1);
    let merge = a.checked_mul_int(l as i128 * (f as i128 - 1))?;
    base.checked_add(&merge)
}

fn validate_fraction(a: &Rational) -> Result<()> {
    if a.checked_cmp(&Rational::ZERO)? == core::cmp::Ordering::Less
        || a.checked_cmp(&Rational::ONE)? == core::cmp::Ordering::Greater
    {
        return Err(Error::param("a", "merge amplification must be in [0, 1]"));
    }
    Ok(())
}

/// Literal evaluation of the per-merge traffic summation for leveling.
///
/// Walks every merge `j = 1..S_l/S_i` of every level pair and adds the upper
/// term (`S_i` written, and also read for on-device levels) plus the lower
/// term `2a * ((j-1) mod f) * S_i`. Serves as the oracle for
/// [`traffic_basic_closed`].
pub fn traffic_basic_sum(layout: &SizeLayout, a: &Rational, f: u64) -> Result<Rational> {
    validate_fraction(a)?;
    layout.require_uniform_growth(f)?;
    level_flow_sum(layout.level_sizes(), layout.sl_bytes(), a, f)
}

fn level_flow_sum(sizes: &[u128], top_bytes: u128, a: &Rational, f: u64) -> Result<Rational> {
    let last = *sizes.last().unwrap();
    let mut total = Rational::ZERO;
    for (i, &size) in sizes[..sizes.len() - 1].iter().enumerate() {
        if !last.is_multiple_of(size) {
            return Err(Error::Geometry(format!("S_l/S_{i} is not integral")));
        }
        let merges = last / size;
        // Upper term: each merge moves the level's data once; the memory
        // level is written only, on-device levels are read and written.
        let upper_factor: u128 = if i == 0 { 1 } else { 2 };
        let upper = merges
            .checked_mul(upper_factor)
            .and_then(|m| m.checked_mul(size))
            .ok_or(Error::Overflow)?;
        total = total.checked_add(&Rational::from_int(upper as i128))?;
        // Lower term: the lower level holds ((j-1) mod f) upper-level units
        // at merge j; fraction `a` of it is read and written.
        let mut mod_sum: u128 = 0;
        for j in 1..=merges {
            mod_sum += (j - 1) % f as u128;
        }
        let lower_units = mod_sum.checked_mul(size).ok_or(Error::Overflow)?;
        let lower = a.checked_mul_int(2 * lower_units as i128)?;
        total = total.checked_add(&lower)?;
    }
    // Scale for datasets larger than one fill of the last level.
    if top_bytes != last {
        if !top_bytes.is_multiple_of(last) {
            return Err(Error::Geometry("dataset must be a multiple of S_l".into()));
        }
        total = total.checked_mul_int((top_bytes / last) as i128)?;
    }
    Ok(total)
}

/// Closed-form leveling traffic `D = S_l * (2l - 1 - a*l + a*f*l)`.
pub fn traffic_basic_closed(sl_bytes: u128, a: &Rational, f: u64, l: u32) -> Result<Rational> {
    validate_fraction(a)?;
    if f < 2 {
        return Err(Error::param("f", "integer growth factor must be >= 2"));
    }
    if l < 1 {
        return Err(Error::param("l", "level count must be >= 1"));
    }
    amplification_factor_exact(a, f, l)?.checked_mul_int(sl_bytes as i128)
}

/// Leveling cost ratio `(2l - 1 - a*l + a*f*l) / r`.
pub fn cost_ratio_basic(params: &ModelParams) -> Result<f64> {
    params.validate()?;
    Ok(amplification_factor(params.a, params.f, params.l) / params.r)
}

/// Literal traffic summation for leveling with a value log: only keys flow
/// through the levels, and one full dataset append is added for the log.
///
/// `key_layout` holds the key geometry `K_0..K_l`; `sl_bytes` is the total
/// dataset (keys plus values) appended to the log.
pub fn traffic_log_sum(
    key_layout: &SizeLayout,
    sl_bytes: u128,
    a: &Rational,
    f: u64,
) -> Result<Rational> {
    validate_fraction(a)?;
    key_layout.require_uniform_growth(f)?;
    if key_layout.sl_bytes() >= sl_bytes {
        return Err(Error::Geometry("key bytes must be smaller than S_l".into()));
    }
    let keys = level_flow_sum(key_layout.level_sizes(), key_layout.sl_bytes(), a, f)?;
    keys.checked_add(&Rational::from_int(sl_bytes as i128))
}

/// Closed-form traffic with a value log: `D = K_l * (2l - 1 - a*l + a*f*l) + S_l`.
pub fn traffic_log_closed(
    kl_bytes: u128,
    sl_bytes: u128,
    a: &Rational,
    f: u64,
    l: u32,
) -> Result<Rational> {
    if kl_bytes >= sl_bytes {
        return Err(Error::Geometry("key bytes must be smaller than S_l".into()));
    }
    let keys = traffic_basic_closed(kl_bytes, a, f, l)?;
    keys.checked_add(&Rational::from_int(sl_bytes as i128))
}

/// Cost ratio with a value log: `(p*(2l - 1 - a*l + a*f*l) + p + 1) / (r*(p + 1))`.
pub fn cost_ratio_log(params: &ModelParams) -> Result<f64> {
    params.validate()?;
    let p = params.require_p()?;
    let x = amplification_factor(params.a, params.f, params.l);
    Ok((p * x + p + 1.0) / (params.r * (p + 1.0)))
}

/// Tiering cost ratio `(2l - 1) / r`; with `C` given, `l = log_f C`.
pub fn cost_ratio_tiering(r: f64, l: f64) -> Result<f64> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::param("r", "achieved throughput must be in (0, 1]"));
    }
    if !(l >= 1.0) {
        return Err(Error::param("l", "level count must be >= 1"));
    }
    Ok((2.0 * l - 1.0) / r)
}

/// Tiering-with-log cost ratio `(p*(2l - 1) + p + 1) / (r*(p + 1))`.
pub fn cost_ratio_tiering_log(params: &ModelParams) -> Result<f64> {
    params.validate()?;
    cost_ratio_tiering_log_parts(params.r, params.l, params.require_p()?)
}

/// Same ratio from its three effective inputs; tiering costs do not depend
/// on the growth factor.
pub fn cost_ratio_tiering_log_parts(r: f64, l: f64, p: f64) -> Result<f64> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::param("r", "achieved throughput must be in (0, 1]"));
    }
    if !(l >= 1.0) {
        return Err(Error::param("l", "level count must be >= 1"));
    }
    if !(p > 0.0) {
        return Err(Error::param("p", "key-to-value ratio must be > 0"));
    }
    let x = 2.0 * l - 1.0;
    Ok((p * x + p + 1.0) / (r * (p + 1.0)))
}

/// Literal per-SST traffic summation: compactions move one SST of size `B`
/// at a time, so the lower level fills once and then stays full, making every
/// later merge pay the full proportional overlap `f*B`.
///
/// Oracle for [`traffic_per_sst_closed`].
pub fn traffic_per_sst_sum(layout: &SizeLayout, a: &Rational, f: u64) -> Result<Rational> {
    validate_fraction(a)?;
    layout.require_uniform_growth(f)?;
    let b = layout
        .sst_bytes()
        .ok_or_else(|| Error::Geometry("per-SST accounting requires an SST size".into()))?;
    let sl = layout.sl_bytes();
    let mut total = Rational::ZERO;
    for (i, &size) in layout.level_sizes()[..layout.level_sizes().len() - 1]
        .iter()
        .enumerate()
    {
        if !size.is_multiple_of(b) {
            return Err(Error::Geometry(format!("S_{i}/B is not integral")));
        }
        let units = size / b; // S_i / B
        let events = (sl / size) * units; // S_l / B moves sourced from L_i
        let upper_factor: u128 = if i == 0 { 1 } else { 2 };
        let upper = events
            .checked_mul(upper_factor)
            .and_then(|e| e.checked_mul(b))
            .ok_or(Error::Overflow)?;
        total = total.checked_add(&Rational::from_int(upper as i128))?;
        // Fill phase: the k-th move sees the lower level k/units-ths full.
        let fill_events = (f as u128).checked_mul(units).ok_or(Error::Overflow)?;
        let mut fill = Rational::ZERO;
        for k in 1..=fill_events {
            fill = fill.checked_add(&Rational::new(k as i128, units as i128)?)?;
        }
        // Steady phase: the lower level is full; every move overlaps f SSTs.
        let steady = (f as u128)
            .checked_mul(events - fill_events)
            .ok_or(Error::Overflow)?;
        let lower_units = fill.checked_add(&Rational::from_int(steady as i128))?;
        let lower = a
            .checked_mul(&lower_units)?
            .checked_mul_int(2 * b as i128)?;
        total = total.checked_add(&lower)?;
    }
    Ok(total)
}

/// Closed-form per-SST traffic
/// `D = S_l * (2l - 1 + a*f*l*B/S_l + 2*a*f*l - a*f*(1 - f^-l)/(1 - f^-1))`.
pub fn traffic_per_sst_closed(
    sl_bytes: u128,
    a: &Rational,
    f: u64,
    l: u32,
    sst_bytes: u128,
) -> Result<Rational> {
    validate_fraction(a)?;
    if f < 2 {
        // f = 1 would divide by zero in the geometric-series term.
        return Err(Error::param("f", "integer growth factor must be >= 2"));
    }
    if l < 1 {
        return Err(Error::param("l", "level count must be >= 1"));
    }
    if sst_bytes == 0 {
        return Err(Error::Geometry("SST size must be positive".into()));
    }
    // Rearranged to integer terms: D = S_l*(2l-1) + a*(f*l*B + 2*f*l*S_l - f*sum(S_1..S_l)).
    let mut level_sum: u128 = 0;
    let mut size = sl_bytes;
    for back in 0..l {
        level_sum = level_sum.checked_add(size).ok_or(Error::Overflow)?;
        if back + 1 < l {
            if !size.is_multiple_of(f as u128) {
                return Err(Error::Geometry(format!("S_l/f^{} is not integral", back + 1)));
            }
            size /= f as u128;
        }
    }
    let base = sl_bytes
        .checked_mul(2 * l as u128 - 1)
        .ok_or(Error::Overflow)?;
    let fl = (f as u128).checked_mul(l as u128).ok_or(Error::Overflow)?;
    let pos = fl
        .checked_mul(sst_bytes)
        .and_then(|x| {
            fl.checked_mul(2)
                .and_then(|y| y.checked_mul(sl_bytes))
                .and_then(|y| x.checked_add(y))
        })
        .ok_or(Error::Overflow)?;
    let neg = (f as u128).checked_mul(level_sum).ok_or(Error::Overflow)?;
    let merge = a.checked_mul(&Rational::from_int(pos as i128).checked_sub(&Rational::from_int(neg as i128))?)?;
    Rational::from_int(base as i128).checked_add(&merge)
}

/// Converts a byte total into the cost ratio `D / (r * S_l)`.
pub fn cost_ratio_from_bytes(d_bytes: f64, sl_bytes: f64, r: f64) -> Result<f64> {
    if !(sl_bytes > 0.0) {
        return Err(Error::param("sl_bytes", "dataset size must be > 0"));
    }
    if !(r > 0.0) {
        return Err(Error::param("r", "achieved throughput must be > 0"));
    }
    Ok(d_bytes / (r * sl_bytes))
}

/// Space amplification of the non-final levels: `sum_{i=1..l} f^-i`.
pub fn space_amplification(f: f64, l: u32) -> Result<f64> {
    if !(f > 1.0) {
        return Err(Error::param("f", "growth factor must be > 1"));
    }
    if l < 1 {
        return Err(Error::param("l", "level count must be >= 1"));
    }
    let mut total = 0.0;
    let mut term = 1.0;
    for _ in 0..l {
        term /= f;
        total += term;
    }
    Ok(total)
}

/// Limit of the in-place/log benefit ratio as merge amplification vanishes
/// and the store collapses to one level: `(p + 1) / (2p + 1)`.
///
/// Values below 1 mean key-value separation loses outright in that regime.
pub fn log_benefit_limit(p: f64) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::param("p", "key-to-value ratio must be > 0"));
    }
    Ok((p + 1.0) / (2.0 * p + 1.0))
}

/// Cost ratio floor `2l - 1` once merge costs vanish (`a = 0`, `r = 1`);
/// minimized by a single level.
pub fn single_level_projection(l: f64) -> Result<f64> {
    if !(l >= 1.0) {
        return Err(Error::param("l", "level count must be >= 1"));
    }
    Ok(2.0 * l - 1.0)
}

/// Total page I/O rate `(R/S_p) * (2*sum(f_i) + 2l - 1)` of the classic
/// multi-level insert cost model.
pub fn lsm_page_rate(params: &LsmParams) -> Result<f64> {
    params.validate()?;
    let sum: f64 = params.growth_factors.iter().sum();
    let l = params.levels() as f64;
    Ok(params.rate_r / params.page_bytes * (2.0 * sum + 2.0 * l - 1.0))
}

/// Leveling traffic under per-level growth factors:
/// `D = C * S_0 * (2l - 1 + a * (sum(f_i) - l))` with `C = prod(f_i)`.
pub fn traffic_variable_growth(s0_bytes: f64, factors: &[f64], a: f64) -> Result<f64> {
    if factors.is_empty() {
        return Err(Error::Empty("factors"));
    }
    if factors.iter().any(|f| !(*f > 1.0)) {
        return Err(Error::param("factors", "every growth factor must be > 1"));
    }
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::param("a", "merge amplification must be in [0, 1]"));
    }
    let l = factors.len() as f64;
    let product: f64 = factors.iter().product();
    let sum: f64 = factors.iter().sum();
    Ok(product * s0_bytes * (2.0 * l - 1.0 + a * (sum - l)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(s: &str) -> Rational {
        Rational::from_decimal_str(s).unwrap()
    }

    #[test]
    fn basic_sum_small_geometry() {
        // S = [1, 10, 100], f = 10, a = 1. Hand evaluation of the summation:
        // row 0: 100*1 + 2*(10 cycles of 0..9)*1 = 100 + 900 = 1000
        // row 1: 10*20  + 2*45*10              = 200 + 900 = 1100
        let layout = SizeLayout::from_sizes(alloc::vec![1, 10, 100]).unwrap();
        let d = traffic_basic_sum(&layout, &Rational::ONE, 10).unwrap();
        assert_eq!(d, Rational::from_int(2100));
        // Cross-check against the closed form on the same geometry.
        let closed = traffic_basic_closed(100, &Rational::ONE, 10, 2).unwrap();
        assert_eq!(d, closed);
    }

    #[test]
    fn basic_sum_single_level_no_merge() {
        let layout = SizeLayout::uniform(64, 4, 1).unwrap();
        let d = traffic_basic_sum(&layout, &Rational::ZERO, 4).unwrap();
        assert_eq!(d, Rational::from_int(256)); // S_l written once
    }

    #[test]
    fn basic_sum_matches_closed_at_fractional_a() {
        let s0 = 64 * 1024 * 1024;
        let layout = SizeLayout::uniform(s0, 8, 3).unwrap();
        let a = rat("0.68");
        let d = traffic_basic_sum(&layout, &a, 8).unwrap();
        let closed = traffic_basic_closed(layout.sl_bytes(), &a, 8, 3).unwrap();
        assert_eq!(d, closed);
    }

    #[test]
    fn basic_sum_rejects_bad_geometry() {
        let layout = SizeLayout::from_sizes(alloc::vec![1, 7, 100]).unwrap();
        assert!(matches!(
            traffic_basic_sum(&layout, &Rational::ONE, 10),
            Err(Error::Geometry(_))
        ));
    }

    #[test]
    fn basic_closed_known_points() {
        // 1000 * (6 - 1 - 3 + 30) = 32000
        let d = traffic_basic_closed(1000, &Rational::ONE, 10, 3).unwrap();
        assert_eq!(d, Rational::from_int(32000));
        // a = 0, l = 1: dataset written once.
        let d = traffic_basic_closed(777, &Rational::ZERO, 10, 1).unwrap();
        assert_eq!(d, Rational::from_int(777));
        assert!(traffic_basic_closed(1, &Rational::ONE, 1, 3).is_err());
        assert!(traffic_basic_closed(1, &Rational::ONE, 10, 0).is_err());
    }

    #[test]
    fn cost_ratio_basic_known_points() {
        let p = ModelParams::from_growth_levels(1.0, 1.0, 10.0, 3.0).unwrap();
        assert_eq!(cost_ratio_basic(&p).unwrap(), 32.0);

        let l = math::ln(1000.0) / math::ln(4.0);
        let p = ModelParams::from_growth_levels(1.0, 1.0, 4.0, l).unwrap();
        assert!((cost_ratio_basic(&p).unwrap() - 23.91).abs() < 0.01);

        // a = 0 reduces to the tiering form.
        let p = ModelParams::from_growth_levels(0.0, 1.0, 7.0, 4.0).unwrap();
        assert_eq!(
            cost_ratio_basic(&p).unwrap(),
            cost_ratio_tiering(1.0, 4.0).unwrap()
        );
    }

    #[test]
    fn log_traffic_key_split_identity() {
        // K_l/S_l = p/(p+1) with p = 1/100: S_l = 10100, K_l = 100.
        let d = traffic_log_closed(100, 10100, &Rational::ONE, 10, 3).unwrap();
        assert_eq!(d, Rational::from_int(100 * 32 + 10100));
        let expected = Rational::new(133, 101)
            .unwrap()
            .checked_mul_int(10100)
            .unwrap();
        assert_eq!(d, expected);
    }

    #[test]
    fn log_sum_matches_closed() {
        let keys = SizeLayout::uniform(5, 10, 3).unwrap();
        let kl = keys.sl_bytes();
        let sl = kl * 101; // p = 1/100
        let a = rat("0.25");
        let d = traffic_log_sum(&keys, sl, &a, 10).unwrap();
        let closed = traffic_log_closed(kl, sl, &a, 10, 3).unwrap();
        assert_eq!(d, closed);
    }

    #[test]
    fn log_traffic_rejects_keys_not_smaller_than_total() {
        assert!(traffic_log_closed(10, 10, &Rational::ONE, 10, 3).is_err());
    }

    #[test]
    fn cost_ratio_log_known_points() {
        let p = ModelParams::from_growth_levels(1.0, 1.0, 10.0, 3.0)
            .unwrap()
            .with_key_value_ratio(0.01)
            .unwrap();
        let got = cost_ratio_log(&p).unwrap();
        assert!((got - (0.01 * 32.0 + 1.01) / 1.01).abs() < 1e-12);
        assert!((got - 1.3168).abs() < 1e-4);

        let p = ModelParams::from_growth_levels(1.0, 1.0, 5.62, 4.0)
            .unwrap()
            .with_key_value_ratio(0.01)
            .unwrap();
        assert!((cost_ratio_log(&p).unwrap() - 1.252).abs() < 0.001);

        // Cross-check through the byte identity.
        let d = traffic_log_closed(100, 10100, &Rational::ONE, 10, 3).unwrap();
        let via_bytes = cost_ratio_from_bytes(d.to_f64(), 10100.0, 1.0).unwrap();
        let p = ModelParams::from_growth_levels(1.0, 1.0, 10.0, 3.0)
            .unwrap()
            .with_key_value_ratio(0.01)
            .unwrap();
        assert!((via_bytes - cost_ratio_log(&p).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn tiering_known_points() {
        assert_eq!(cost_ratio_tiering(1.0, 3.0).unwrap(), 5.0);
        assert_eq!(cost_ratio_tiering(1.0, 1.0).unwrap(), 1.0);
        assert_eq!(cost_ratio_tiering(0.5, 3.0).unwrap(), 10.0);
    }

    #[test]
    fn tiering_log_known_points() {
        let p = ModelParams::from_growth_levels(0.0, 1.0, 10.0, 3.0)
            .unwrap()
            .with_key_value_ratio(0.1)
            .unwrap();
        assert!((cost_ratio_tiering_log(&p).unwrap() - 1.6 / 1.1).abs() < 1e-12);
        // Equals the log form at a = 0.
        assert_eq!(
            cost_ratio_tiering_log(&p).unwrap(),
            cost_ratio_log(&p).unwrap()
        );
        // Tiny p approaches the write-once floor from above.
        let p = ModelParams::from_growth_levels(0.0, 1.0, 10.0, 3.0)
            .unwrap()
            .with_key_value_ratio(1e-6)
            .unwrap();
        let v = cost_ratio_tiering_log(&p).unwrap();
        assert!(v > 1.0 && v < 1.001);
    }

    #[test]
    fn per_sst_sum_matches_closed() {
        for f in [4u64, 8] {
            for l in [2u32, 3] {
                let layout = SizeLayout::uniform(8, f, l)
                    .unwrap()
                    .with_sst_bytes(1)
                    .unwrap();
                for a in ["0", "0.25", "0.68", "1"] {
                    let a = rat(a);
                    let sum = traffic_per_sst_sum(&layout, &a, f).unwrap();
                    let closed =
                        traffic_per_sst_closed(layout.sl_bytes(), &a, f, l, 1).unwrap();
                    assert_eq!(sum, closed, "f={f} l={l}");
                }
            }
        }
    }

    #[test]
    fn per_sst_collapses_and_dominates() {
        // a = 0 collapses to S_l * (2l - 1).
        let d = traffic_per_sst_closed(4096, &Rational::ZERO, 8, 3, 16).unwrap();
        assert_eq!(d, Rational::from_int(4096 * 5));
        // Per-SST keeps levels fuller, so it costs more than full-level.
        let a = rat("0.68");
        let per_sst = traffic_per_sst_closed(4096, &a, 8, 3, 16).unwrap();
        let basic = traffic_basic_closed(4096, &a, 8, 3).unwrap();
        assert_eq!(
            per_sst.checked_cmp(&basic).unwrap(),
            core::cmp::Ordering::Greater
        );
        assert!(traffic_per_sst_closed(4096, &a, 1, 3, 16).is_err());
    }

    #[test]
    fn per_sst_single_level_write_once() {
        let layout = SizeLayout::uniform(8, 4, 1)
            .unwrap()
            .with_sst_bytes(8)
            .unwrap();
        let d = traffic_per_sst_sum(&layout, &Rational::ZERO, 4).unwrap();
        assert_eq!(d, Rational::from_int(32));
    }

    #[test]
    fn traffic_estimate_combines_bytes_and_ratio() {
        let est = TrafficEstimate::new(32000.0, 1000.0, 1.0).unwrap();
        assert_eq!(est.cost_ratio, 32.0);
        let est = TrafficEstimate::new(2000.0, 1000.0, 0.5).unwrap();
        assert_eq!(est.cost_ratio, 4.0);
        assert!(TrafficEstimate::new(999.0, 1000.0, 1.0).is_err());
    }

    #[test]
    fn cost_ratio_from_bytes_known_points() {
        assert_eq!(cost_ratio_from_bytes(32000.0, 1000.0, 1.0).unwrap(), 32.0);
        assert_eq!(cost_ratio_from_bytes(500.0, 500.0, 1.0).unwrap(), 1.0);
        // iostat-style totals over a (1079+3)*16e6-byte dataset.
        let dataset = 1082.0 * 16e6;
        let measured = 11.5 * dataset;
        assert!((cost_ratio_from_bytes(measured, dataset, 1.0).unwrap() - 11.5).abs() < 1e-12);
        assert!(cost_ratio_from_bytes(1.0, 0.0, 1.0).is_err());
        assert!(cost_ratio_from_bytes(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn space_amplification_known_points() {
        assert!(space_amplification(4.0, 5).unwrap() > 0.25);
        let v = space_amplification(10.0, 3).unwrap();
        assert!((0.11..=0.112).contains(&v));
        assert_eq!(space_amplification(8.0, 1).unwrap(), 1.0 / 8.0);
        assert!(space_amplification(1.0, 3).is_err());
    }

    #[test]
    fn log_benefit_limit_known_points() {
        assert!((log_benefit_limit(0.01).unwrap() - 1.01 / 1.02).abs() < 1e-12);
        assert!((log_benefit_limit(1.0).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        // Structural identity with the two cost ratios at a = 0, l = 1.
        let base = ModelParams::from_growth_levels(0.0, 1.0, 10.0, 1.0).unwrap();
        let log = base.with_key_value_ratio(0.3).unwrap();
        let ratio = cost_ratio_basic(&log).unwrap() / cost_ratio_log(&log).unwrap();
        assert!((ratio - log_benefit_limit(0.3).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn single_level_projection_known_points() {
        assert_eq!(single_level_projection(1.0).unwrap(), 1.0);
        assert_eq!(single_level_projection(3.0).unwrap(), 5.0);
        let argmin = (1..=10)
            .min_by(|x, y| {
                single_level_projection(*x as f64)
                    .unwrap()
                    .total_cmp(&single_level_projection(*y as f64).unwrap())
            })
            .unwrap();
        assert_eq!(argmin, 1);
    }

    #[test]
    fn lsm_page_rate_known_points() {
        let p = LsmParams {
            rate_r: 4096.0,
            page_bytes: 4096.0,
            growth_factors: alloc::vec![10.0; 3],
        };
        assert_eq!(lsm_page_rate(&p).unwrap(), 65.0);

        let c = 50.0;
        let p = LsmParams {
            rate_r: 1.0,
            page_bytes: 1.0,
            growth_factors: alloc::vec![c],
        };
        assert_eq!(lsm_page_rate(&p).unwrap(), 2.0 * c + 1.0);
    }

    #[test]
    fn lsm_curve_exceeds_leveling_curve_by_level_term() {
        // Second factor of the page rate minus the leveling polynomial at
        // a = 1 is l*(f+1) for uniform growth.
        for (f, l) in [(10.0, 3.0), (4.0, 5.0)] {
            let lsm = 2.0 * f * l + 2.0 * l - 1.0;
            let vat = amplification_factor(1.0, f, l);
            assert!((lsm - vat - l * (f + 1.0)).abs() < 1e-9);
        }
    }

    #[test]
    fn variable_growth_matches_uniform_closed_form() {
        let factors = [8.0, 8.0, 8.0];
        let d = traffic_variable_growth(64.0, &factors, 0.5).unwrap();
        let expected = 512.0 * 64.0 * amplification_factor(0.5, 8.0, 3.0);
        assert!((d - expected).abs() < 1e-6);
    }

    #[test]
    fn params_constructors_resolve_two_of_three() {
        let p = ModelParams::from_growth_ratio(1.0, 1.0, 10.0, 1000.0).unwrap();
        assert!((p.l - 3.0).abs() < 1e-12);
        let p = ModelParams::from_levels_ratio(1.0, 1.0, 3.0, 1000.0).unwrap();
        assert!((p.f - 10.0).abs() < 1e-12);
        let p = ModelParams::from_growth_levels(1.0, 1.0, 10.0, 3.0).unwrap();
        assert!((p.c - 1000.0).abs() < 1e-9);
        assert!(ModelParams::from_all(1.0, 1.0, 10.0, 3.0, 1000.0).is_ok());
        assert!(ModelParams::from_all(1.0, 1.0, 10.0, 3.0, 900.0).is_err());
    }

    #[test]
    fn params_validation_rejects_out_of_domain() {
        assert!(ModelParams::from_growth_levels(-0.1, 1.0, 10.0, 3.0).is_err());
        assert!(ModelParams::from_growth_levels(1.1, 1.0, 10.0, 3.0).is_err());
        assert!(ModelParams::from_growth_levels(1.0, 0.0, 10.0, 3.0).is_err());
        assert!(ModelParams::from_growth_levels(1.0, 1.0, 1.0, 3.0).is_err());
        assert!(ModelParams::from_growth_levels(1.0, 1.0, 10.0, 0.5).is_err());
        assert!(ModelParams::from_growth_levels(1.0, 1.0, 10.0, 3.0)
            .unwrap()
            .with_key_value_ratio(0.0)
            .is_err());
    }

    #[test]
    fn layout_accessors_and_validation() {
        let layout = SizeLayout::uniform(64, 8, 3)
            .unwrap()
            .with_sst_bytes(16)
            .unwrap()
            .with_key_split(300)
            .unwrap();
        assert_eq!(layout.s0_bytes(), 64);
        assert_eq!(layout.sl_bytes(), 64 * 512);
        assert_eq!(layout.levels(), 3);
        assert_eq!(layout.kl_bytes(), Some(300));
        assert_eq!(layout.vl_bytes(), Some(64 * 512 - 300));
        assert!(SizeLayout::uniform(64, 8, 3).unwrap().with_sst_bytes(65).is_err());
        assert!(SizeLayout::from_sizes(alloc::vec![10, 10]).is_err());
        assert!(SizeLayout::from_sizes(alloc::vec![10]).is_err());
    }
}
