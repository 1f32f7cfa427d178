//! Exact rational arithmetic over `i128`.
//!
//! Traffic totals must be compared exactly against their summation oracles,
//! including fractional merge-amplification values such as 0.68 = 17/25 that
//! have no finite binary representation. Values are kept reduced with a
//! positive denominator, so `PartialEq` is structural equality.

use alloc::string::String;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Rational {
    num: i128,
    den: i128,
}

const OVERFLOW: Error = Error::Overflow;

fn gcd(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.abs()
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };
    pub const ONE: Rational = Rational { num: 1, den: 1 };

    pub fn new(num: i128, den: i128) -> Result<Rational> {
        if den == 0 {
            return Err(Error::param("denominator", "must be non-zero"));
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: i128, den: i128) -> Rational {
        debug_assert!(den != 0);
        if num == 0 {
            return Rational::ZERO;
        }
        let sign = if (num < 0) ^ (den < 0) { -1 } else { 1 };
        let g = gcd(num, den);
        Rational {
            num: sign * (num / g).abs(),
            den: (den / g).abs(),
        }
    }

    pub fn from_int(v: i128) -> Rational {
        Rational { num: v, den: 1 }
    }

    /// Parses a plain decimal literal ("1", "0.68", ".5") into an exact ratio.
    ///
    /// This is how fractional parameters enter exact traffic computations:
    /// going through `f64` first would silently turn 0.68 into
    /// 0.68000000000000000444... and break oracle equality.
    pub fn from_decimal_str(s: &str) -> Result<Rational> {
        let s = s.trim();
        let bad = || Error::param("decimal", alloc::format!("`{s}` is not a decimal literal"));
        if s.is_empty() {
            return Err(bad());
        }
        let (sign, digits) = match s.strip_prefix('-') {
            Some(rest) => (-1i128, rest),
            None => (1i128, s.strip_prefix('+').unwrap_or(s)),
        };
        let (int_part, frac_part) = match digits.split_once('.') {
            Some((i, f)) => (i, f),
            None => (digits, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let mut num: i128 = 0;
        for b in int_part.bytes().chain(frac_part.bytes()) {
            num = num
                .checked_mul(10)
                .and_then(|n| n.checked_add((b - b'0') as i128))
                .ok_or(OVERFLOW)?;
        }
        let mut den: i128 = 1;
        for _ in 0..frac_part.len() {
            den = den.checked_mul(10).ok_or(OVERFLOW)?;
        }
        Ok(Self::reduced(sign * num, den))
    }

    pub fn numerator(&self) -> i128 {
        self.num
    }

    pub fn denominator(&self) -> i128 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    /// Exact integer value, if the ratio is integral.
    pub fn to_integer(&self) -> Option<i128> {
        (self.den == 1).then_some(self.num)
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn checked_add(&self, other: &Rational) -> Result<Rational> {
        // Cross-multiply via the gcd of denominators to delay overflow.
        let g = gcd(self.den, other.den);
        let lhs = self.num.checked_mul(other.den / g).ok_or(OVERFLOW)?;
        let rhs = other.num.checked_mul(self.den / g).ok_or(OVERFLOW)?;
        let num = lhs.checked_add(rhs).ok_or(OVERFLOW)?;
        let den = (self.den / g).checked_mul(other.den).ok_or(OVERFLOW)?;
        Ok(Self::reduced(num, den))
    }

    pub fn checked_sub(&self, other: &Rational) -> Result<Rational> {
        self.checked_add(&Rational {
            num: other.num.checked_neg().ok_or(OVERFLOW)?,
            den: other.den,
        })
    }

    pub fn checked_mul(&self, other: &Rational) -> Result<Rational> {
        // Reduce across the diagonal first so intermediates stay small.
        let g1 = gcd(self.num, other.den);
        let g2 = gcd(other.num, self.den);
        let num = (self.num / g1).checked_mul(other.num / g2).ok_or(OVERFLOW)?;
        let den = (self.den / g2).checked_mul(other.den / g1).ok_or(OVERFLOW)?;
        Ok(Self::reduced(num, den))
    }

    pub fn checked_mul_int(&self, v: i128) -> Result<Rational> {
        self.checked_mul(&Rational::from_int(v))
    }

    pub fn checked_div(&self, other: &Rational) -> Result<Rational> {
        if other.num == 0 {
            return Err(Error::param("divisor", "division by zero"));
        }
        self.checked_mul(&Rational {
            num: other.den,
            den: other.num,
        })
    }

    pub fn checked_cmp(&self, other: &Rational) -> Result<core::cmp::Ordering> {
        let lhs = self.num.checked_mul(other.den).ok_or(OVERFLOW)?;
        let rhs = other.num.checked_mul(self.den).ok_or(OVERFLOW)?;
        Ok(lhs.cmp(&rhs))
    }

    pub fn display(&self) -> String {
        if self.den == 1 {
            alloc::format!("{}", self.num)
        } else {
            alloc::format!("{}/{}", self.num, self.den)
        }
    }
}

impl core::fmt::Display for Rational {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}
