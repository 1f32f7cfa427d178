pub mod calibrate;
pub mod compare;
pub mod eval;
pub mod optimize;
pub mod simulate;
pub mod sweep;
