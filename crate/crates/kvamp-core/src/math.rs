//! Thin wrappers over `libm` so float math is identical with and without the
//! standard library.

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn powf(base: f64, exp: f64) -> f64 {
    libm::pow(base, exp)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

/// Euler's number.
pub const E: f64 = core::f64::consts::E;
