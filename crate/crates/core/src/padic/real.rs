use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Fractional bits carried by [`ExtReal`].
pub const EXT_FRAC_BITS: u32 = 192;

/// Values below this threshold are re-evaluated in extended precision
/// before they take part in record comparisons.
pub const EXTENDED_THRESHOLD: f64 = 1.0 / (1u64 << 20) as f64;

/// How real-valued products are carried.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrecisionMode {
    /// binary64, with an extended re-evaluation below [`EXTENDED_THRESHOLD`].
    #[default]
    Binary64,
    /// Every product is carried with [`EXT_FRAC_BITS`] fractional bits.
    Extended,
}

impl PrecisionMode {
    pub fn wants_extended(self, approx: f64) -> bool {
        match self {
            PrecisionMode::Extended => true,
            PrecisionMode::Binary64 => approx < EXTENDED_THRESHOLD,
        }
    }
}

impl FromStr for PrecisionMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "binary64" | "f64" | "double" => Ok(PrecisionMode::Binary64),
            "extended" | "ext" => Ok(PrecisionMode::Extended),
            other => Err(Error::Parse(format!("unknown precision mode {other:?}"))),
        }
    }
}

impl fmt::Display for PrecisionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PrecisionMode::Binary64 => "binary64",
            PrecisionMode::Extended => "extended",
        })
    }
}

/// Fixed-point real `mantissa * 2^-EXT_FRAC_BITS`.
///
/// Construction rounds toward minus infinity; every constructor is
/// within one unit in the last place of the true value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtReal {
    mantissa: BigInt,
}

impl ExtReal {
    pub fn zero() -> Self {
        ExtReal { mantissa: BigInt::zero() }
    }

    pub fn from_mantissa(mantissa: BigInt) -> Self {
        ExtReal { mantissa }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    /// `num / den`, `den > 0`.
    pub fn from_ratio(num: &BigInt, den: &BigInt) -> Self {
        debug_assert!(den.is_positive());
        ExtReal { mantissa: (num << EXT_FRAC_BITS as usize).div_floor(den) }
    }

    /// `(a + b sqrt(d)) / c` with `c > 0`, `d > 0` non-square.
    pub fn from_surd(a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) -> Self {
        debug_assert!(c.is_positive() && d.is_positive());
        let shift = EXT_FRAC_BITS as usize;
        // floor(|b| sqrt(d) 2^K), exact integer square root
        let root = (b * b * d << (2 * shift)).sqrt();
        let num = if b.is_negative() {
            (a << shift) - root - 1
        } else {
            (a << shift) + root
        };
        ExtReal { mantissa: num.div_floor(c) }
    }

    pub fn abs(&self) -> Self {
        ExtReal { mantissa: self.mantissa.abs() }
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        ExtReal { mantissa: &self.mantissa * k }
    }

    /// Division by a positive integer, rounding toward minus infinity.
    pub fn div_int(&self, k: &BigInt) -> Self {
        ExtReal { mantissa: self.mantissa.div_floor(k) }
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.mantissa.bits();
        if bits <= 1000 {
            let m = self.mantissa.to_f64().unwrap_or(f64::NAN);
            return m * 2f64.powi(-(EXT_FRAC_BITS as i32));
        }
        let drop = bits - 900;
        let m = (&self.mantissa >> drop as usize).to_f64().unwrap_or(f64::NAN);
        m * 2f64.powi(drop as i32 - EXT_FRAC_BITS as i32)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn ratio_and_surd() {
        let third = ExtReal::from_ratio(&b(1), &b(3));
        assert!((third.to_f64() - 1.0 / 3.0).abs() < 1e-16);
        let s = ExtReal::from_surd(&b(0), &b(1), &b(1), &b(2));
        assert_eq!(s.to_f64(), 2f64.sqrt());
        let t = ExtReal::from_surd(&b(3), &b(-2), &b(1), &b(2));
        // 3 - 2 sqrt 2 = 0.17157287525381...
        assert!((t.to_f64() - (3.0 - 2.0 * 2f64.sqrt())).abs() < 1e-15);
        assert!(t.mantissa().is_positive());
    }

    #[test]
    fn resolves_tiny_differences() {
        // 665857/470832 - sqrt 2 ≈ 1.59e-12, opposite rounding in binary64
        let sq = ExtReal::from_surd(&b(0), &b(470832), &b(470832), &b(2));
        let r = ExtReal::from_ratio(&b(665857), &b(470832));
        let diff = ExtReal::from_mantissa(r.mantissa() - sq.mantissa());
        let expect = 1.5948618246068547e-12;
        assert!((diff.to_f64() - expect).abs() < 1e-24);
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("extended".parse::<PrecisionMode>().unwrap(), PrecisionMode::Extended);
        assert_eq!("binary64".parse::<PrecisionMode>().unwrap(), PrecisionMode::Binary64);
        assert!("quad".parse::<PrecisionMode>().is_err());
        assert!(PrecisionMode::Binary64.wants_extended(1e-7));
        assert!(!PrecisionMode::Binary64.wants_extended(1e-3));
    }
}
