//! Level-count and growth-factor optimization under the two classic
//! constraints: fixed dataset-to-memory ratio `C = S_l/S_0`, and fixed total
//! capacity `S_0 + ... + S_l`.
//!
//! Under constant `C` the cost ratio is scanned over integer level counts
//! with `f = C^(1/l)`; the unit-parameter closed form via the Lambert W
//! function is exposed as the analytic reference. Under constant total size
//! the per-level growth factors follow a backward recurrence
//! (`f_{l-1} = 1 + f_l`, each earlier factor adding a shrinking correction),
//! solved here by shooting on the last factor.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::model::DesignKind;

/// One evaluation of the principal branch of the Lambert W function.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LambertEval {
    /// The argument `x`.
    pub argument: f64,
    /// Principal-branch value `W_0(x)`.
    pub w0: f64,
    /// Scaled residual `|w*e^w - x| / max(1, |x|)`.
    ///
    /// The residual is scaled because for large `x` the product `w*e^w`
    /// cannot be represented closer than one ulp of `x`, which alone exceeds
    /// any fixed absolute tolerance.
    pub residual: f64,
}

/// Principal branch `W_0(x)` for `x >= -1/e`, by Halley iteration.
///
/// Initial guess: a branch-point series near `-1/e`, `ln x - ln ln x` for
/// large `x`, and the argument itself in between.
pub fn lambert_w0(x: f64) -> Result<LambertEval> {
    if !x.is_finite() {
        return Err(Error::param("x", "argument must be finite"));
    }
    let branch_point = -1.0 / math::E;
    if x < branch_point - 1e-12 {
        return Err(Error::OutOfRange(format!(
            "Lambert W_0 requires x >= -1/e = {branch_point}, got {x}"
        )));
    }
    if x == 0.0 {
        return Ok(LambertEval {
            argument: x,
            w0: 0.0,
            residual: 0.0,
        });
    }

    let mut w = if x < -0.25 {
        // Series around the branch point: w = -1 + p - p^2/3 + 11 p^3/72.
        let p = math::sqrt(2.0 * (math::E * x + 1.0).max(0.0));
        -1.0 + p - p * p / 3.0 + 11.0 * p * p * p / 72.0
    } else if x > 2.0 {
        let lx = math::ln(x);
        lx - math::ln(lx)
    } else {
        x * (1.0 - x / (1.0 + x))
    };

    for _ in 0..64 {
        let ew = math::exp(w);
        let wew = w * ew;
        let diff = wew - x;
        if diff == 0.0 {
            break;
        }
        // Halley step: f = w e^w - x, f' = e^w (w + 1).
        let denom = ew * (w + 1.0) - (w + 2.0) * diff / (2.0 * (w + 1.0));
        let step = diff / denom;
        let next = w - step;
        if !next.is_finite() {
            break;
        }
        if (next - w).abs() <= 1e-16 * next.abs().max(1.0) {
            w = next;
            break;
        }
        w = next;
    }

    let residual = (w * math::exp(w) - x).abs() / x.abs().max(1.0);
    Ok(LambertEval {
        argument: x,
        w0: w,
        residual,
    })
}

/// Closed-form level count and growth factor minimizing the unit-parameter
/// cost `2l*C^(1/l) + 2l - 1` under constant `C`:
/// `l = ln C / (W(1/e) + 1)`, `f = e^(W(1/e) + 1)`.
///
/// The optimal `f` is independent of `C`. With the exact principal-branch
/// value `W(1/e) = 0.27846...` this gives `f = 3.591...`; references that
/// round `W(1/e)` to 0.5 quote `f = e^1.5 = 4.48...` instead.
pub fn optimal_levels_constant_c_exact(c: f64) -> Result<(f64, f64)> {
    if !(c > 1.0) {
        return Err(Error::param("c", "dataset-to-memory ratio must be > 1"));
    }
    let w = lambert_w0(1.0 / math::E)?.w0;
    let l = math::ln(c) / (w + 1.0);
    let f = math::exp(w + 1.0);
    Ok((l, f))
}

/// Simplified optimum from minimizing `l * C^(1/l)` alone:
/// `l = ln C`, `f = e`.
pub fn optimal_levels_simplified(c: f64) -> Result<(f64, f64)> {
    if !(c > 1.0) {
        return Err(Error::param("c", "dataset-to-memory ratio must be > 1"));
    }
    Ok((math::ln(c), math::E))
}

/// One point of an integer-level optimization scan.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CurvePoint {
    pub levels: u32,
    pub growth: f64,
    pub objective: f64,
}

/// Result of minimizing a design's cost ratio over level counts at
/// constant `C`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OptimizationResult {
    /// Minimizing integer level count (ties broken toward fewer levels,
    /// which also means less space amplification).
    pub levels: u32,
    /// Unconstrained real-valued minimizer over the same range.
    pub levels_real: f64,
    /// Growth factor `C^(1/levels)` at the integer optimum.
    pub growth: f64,
    /// Cost ratio at the integer optimum.
    pub objective: f64,
    /// Full scan curve, one point per level count in the range.
    pub curve: Vec<CurvePoint>,
}

fn objective_at(design: DesignKind, a: f64, r: f64, p: Option<f64>, c: f64, l: f64) -> Result<f64> {
    let f = math::powf(c, 1.0 / l);
    let x = match design {
        DesignKind::Leveling | DesignKind::LevelingLog => 2.0 * l - 1.0 - a * l + a * f * l,
        DesignKind::Tiering | DesignKind::TieringLog => 2.0 * l - 1.0,
    };
    if design.uses_log() {
        let p = p.ok_or_else(|| Error::param("p", "key-to-value ratio required for log designs"))?;
        Ok((p * x + p + 1.0) / (r * (p + 1.0)))
    } else {
        Ok(x / r)
    }
}

/// Scans integer level counts with `f = C^(1/l)` and returns the minimizing
/// point together with the full curve.
pub fn minimize_cost_ratio(
    design: DesignKind,
    a: f64,
    r: f64,
    p: Option<f64>,
    c: f64,
    l_range: core::ops::RangeInclusive<u32>,
) -> Result<OptimizationResult> {
    if l_range.is_empty() {
        return Err(Error::Empty("level range"));
    }
    if *l_range.start() < 1 {
        return Err(Error::param("l", "level count must be >= 1"));
    }
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::param("a", "merge amplification must be in [0, 1]"));
    }
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::param("r", "achieved throughput must be in (0, 1]"));
    }
    if !(c > 1.0) {
        return Err(Error::param("c", "dataset-to-memory ratio must be > 1"));
    }

    let mut curve = Vec::new();
    let mut best: Option<CurvePoint> = None;
    for l in l_range.clone() {
        let objective = objective_at(design, a, r, p, c, l as f64)?;
        let point = CurvePoint {
            levels: l,
            growth: math::powf(c, 1.0 / l as f64),
            objective,
        };
        curve.push(point);
        // Strict `<` keeps the earlier (smaller) level count on ties.
        if best.is_none_or(|b| objective < b.objective) {
            best = Some(point);
        }
    }
    let best = best.unwrap();

    let levels_real = golden_section_min(
        |l| objective_at(design, a, r, p, c, l).unwrap_or(f64::INFINITY),
        *l_range.start() as f64,
        *l_range.end() as f64,
    );

    Ok(OptimizationResult {
        levels: best.levels,
        levels_real,
        growth: best.growth,
        objective: best.objective,
        curve,
    })
}

fn golden_section_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if (hi - lo).abs() < 1e-12 * hi.abs().max(1.0) {
            break;
        }
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = f(d);
        }
    }
    0.5 * (lo + hi)
}

/// Per-level growth factors under a constant total capacity, with the solver
/// diagnostics retained.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GrowthSchedule {
    /// Factors `f_1..f_l`, weakly decreasing.
    pub factors: Vec<f64>,
    /// The multiplier `-f_l / (S_0 * prod(f_i))` from the stationarity
    /// conditions; diagnostics only.
    pub lagrange_multiplier: f64,
    /// Total capacity `S_0 * (1 + f_1 + f_1 f_2 + ... + prod f_i)`.
    pub total_bytes: f64,
    pub s0_bytes: f64,
}

impl GrowthSchedule {
    pub fn levels(&self) -> u32 {
        self.factors.len() as u32
    }

    /// `S_0 + S_1 + ... + S_l` implied by the factors.
    pub fn capacity_sum(&self) -> f64 {
        let mut sum = 1.0;
        let mut prod = 1.0;
        for f in &self.factors {
            prod *= f;
            sum += prod;
        }
        sum * self.s0_bytes
    }

    /// Checks each consecutive pair against the recurrence
    /// `f_{i} = f_{i+1} + 1 / prod(f_{i+1}..f_{l-1})`, returning the largest
    /// deviation.
    pub fn recurrence_residual(&self) -> f64 {
        let l = self.factors.len();
        if l < 2 {
            return 0.0;
        }
        let mut worst = (self.factors[l - 2] - 1.0 - self.factors[l - 1]).abs();
        for i in (0..l.saturating_sub(2)).rev() {
            let tail: f64 = self.factors[i + 1..l - 1].iter().product();
            let expect = self.factors[i + 1] + 1.0 / tail;
            worst = worst.max((self.factors[i] - expect).abs());
        }
        worst
    }
}

/// Builds the schedule implied by anchoring the last factor `f_l`.
pub fn growth_schedule_from_anchor(levels: u32, f_last: f64, s0_bytes: f64) -> Result<GrowthSchedule> {
    if levels < 2 {
        return Err(Error::param("levels", "schedule requires at least 2 levels"));
    }
    if !(f_last > 1.0) {
        return Err(Error::param("f_last", "growth factor must be > 1"));
    }
    if !(s0_bytes > 0.0) {
        return Err(Error::param("s0_bytes", "S_0 must be > 0"));
    }
    let l = levels as usize;
    let mut factors = alloc::vec![0.0f64; l];
    factors[l - 1] = f_last;
    factors[l - 2] = 1.0 + f_last;
    for i in (0..l.saturating_sub(2)).rev() {
        // f_i = f_{i+1} + 1 / (f_{i+1} * ... * f_{l-1})  (1-based: product to l-1)
        let tail: f64 = factors[i + 1..l - 1].iter().product();
        factors[i] = factors[i + 1] + 1.0 / tail;
    }
    let prod: f64 = factors.iter().product();
    let lagrange_multiplier = -f_last / (s0_bytes * prod);
    let mut schedule = GrowthSchedule {
        factors,
        lagrange_multiplier,
        total_bytes: 0.0,
        s0_bytes,
    };
    schedule.total_bytes = schedule.capacity_sum();
    Ok(schedule)
}

/// Relative tolerance on the capacity-sum constraint.
pub const SCHEDULE_SUM_RTOL: f64 = 1e-9;

/// Solves the constant-total-size schedule: finds `f_l` such that
/// `S_0 * (1 + f_1 + f_1 f_2 + ... + prod f_i) = total_bytes`, then unrolls
/// the recurrence. The sum is strictly increasing in `f_l`, so bisection on
/// the anchor converges.
pub fn growth_schedule_constant_total(
    levels: u32,
    total_bytes: u128,
    s0_bytes: u128,
) -> Result<GrowthSchedule> {
    if levels < 2 {
        return Err(Error::param("levels", "schedule requires at least 2 levels"));
    }
    if s0_bytes == 0 {
        return Err(Error::param("s0_bytes", "S_0 must be > 0"));
    }
    let total = total_bytes as f64;
    let s0 = s0_bytes as f64;
    if total <= (levels as f64 + 1.0) * s0 {
        return Err(Error::Infeasible(format!(
            "total capacity {total_bytes} cannot fit {} levels above S_0 = {s0_bytes}",
            levels
        )));
    }

    let sum_at = |anchor: f64| -> f64 {
        growth_schedule_from_anchor(levels, anchor, s0)
            .map(|s| s.capacity_sum())
            .unwrap_or(f64::INFINITY)
    };

    // The anchor -> sum map is increasing; start just above the degenerate
    // anchor and double until the target is bracketed.
    let mut lo = 1.0 + 1e-9;
    if sum_at(lo) >= total {
        return Err(Error::Infeasible(format!(
            "total capacity {total_bytes} is below the minimum {:.0} reachable with {} levels",
            sum_at(lo),
            levels
        )));
    }
    let mut hi = 2.0;
    let mut doublings = 0;
    while sum_at(hi) < total {
        hi *= 2.0;
        doublings += 1;
        if doublings > 200 {
            return Err(Error::Infeasible("capacity target unreachable".into()));
        }
    }

    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let sum = sum_at(mid);
        if (sum - total).abs() <= SCHEDULE_SUM_RTOL * total {
            lo = mid;
            hi = mid;
            break;
        }
        if sum < total {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let anchor = 0.5 * (lo + hi);
    let mut schedule = growth_schedule_from_anchor(levels, anchor, s0)?;
    schedule.total_bytes = total;
    let achieved = schedule.capacity_sum();
    if (achieved - total).abs() > 1e-6 * total {
        return Err(Error::Infeasible(format!(
            "bisection did not reach the capacity target (best {achieved}, want {total})"
        )));
    }
    Ok(schedule)
}
