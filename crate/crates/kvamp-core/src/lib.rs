//! Insert-path I/O amplification for multi-level key-value stores: closed
//! forms ([`model`]), level-configuration optimization ([`optimize`]),
//! compaction replay at two fidelities ([`sim`]), and parameter estimation
//! from measurements ([`calibrate`]).
//!
//! The crate is `no_std`-compatible (`alloc` required); float math goes
//! through `libm` so results are identical with and without `std`.

#![cfg_attr(not(feature = "std"), no_std)]
// `!(x > 0.0)` is used instead of `x <= 0.0` throughout: the negation also
// rejects NaN, which the non-negated form would let through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod calibrate;
pub mod error;
pub(crate) mod math;
pub mod model;
pub mod optimize;
pub mod rational;
pub mod sim;

pub use calibrate::{CompactionRecord, DeviceProfile, SystemPreset, TraceStats};
pub use error::{Error, Result};
pub use model::{DesignKind, LsmParams, ModelParams, SizeLayout, TrafficEstimate};
pub use optimize::{GrowthSchedule, LambertEval, OptimizationResult};
pub use rational::Rational;
pub use sim::{SimConfig, SimOutcome, SimReport, WorkloadSpec};
