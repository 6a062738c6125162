use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

use crate::contfrac::QuadIrr;
use crate::error::{Error, Result};
use crate::padic::{ExtReal, EXT_FRAC_BITS};

/// The real parameter `u`.
///
/// `Float` values are taken as the exact dyadic rationals they encode; the
/// evaluator refuses multipliers `q` so large that `q * ulp(u) >= 1`,
/// since past that point the input carries no information about `<qu>`.
#[derive(Clone, Debug, PartialEq)]
pub enum RealParam {
    Rational(BigRational),
    Quadratic(QuadIrr),
    Float(f64),
}

impl RealParam {
    pub fn to_f64(&self) -> f64 {
        match self {
            RealParam::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            RealParam::Quadratic(q) => q.to_f64(),
            RealParam::Float(x) => *x,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            RealParam::Rational(r) => r.is_zero(),
            RealParam::Quadratic(_) => false,
            RealParam::Float(x) => *x == 0.0,
        }
    }

    /// `k * u`, exact for every kind (a scaled float becomes a rational).
    pub fn scaled(&self, k: &BigInt) -> RealParam {
        match self {
            RealParam::Rational(r) => RealParam::Rational(r * BigRational::from_integer(k.clone())),
            RealParam::Quadratic(q) if k.is_zero() => RealParam::Rational(BigRational::zero()),
            RealParam::Quadratic(q) => RealParam::Quadratic(q.mul_int(k)),
            RealParam::Float(x) => {
                let r = BigRational::from_f64(*x).expect("finite float");
                RealParam::Rational(r * BigRational::from_integer(k.clone()))
            }
        }
    }
}

impl fmt::Display for RealParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealParam::Rational(r) => write!(f, "{r}"),
            RealParam::Quadratic(q) => write!(f, "{q}"),
            RealParam::Float(x) => write!(f, "{x:e}"),
        }
    }
}

#[derive(Clone, Debug)]
enum Fast {
    Rat { n: i128, d: i128 },
    Quad { a: i128, b: i128, c: i128, d: i128, sqrt_d: f64 },
    // u = m * 2^e exactly
    Dyadic { m: i128, e: i32 },
    Big,
}

/// A compiled evaluator of `qu - m` for one fixed `u`.
///
/// Machine-width arithmetic is tried first and every operation is
/// overflow-checked; on overflow the exact big-integer path takes over.
#[derive(Clone, Debug)]
pub struct RealEval {
    param: RealParam,
    fast: Fast,
    ulp: f64,
}

fn dyadic_parts(x: f64) -> (i128, i32) {
    if x == 0.0 {
        return (0, 0);
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { -1 } else { 1 };
    let exp = ((bits >> 52) & 0x7ff) as i32;
    let frac = (bits & ((1u64 << 52) - 1)) as i128;
    let (mut m, mut e) = if exp == 0 { (frac, -1074) } else { (frac | (1 << 52), exp - 1075) };
    while m & 1 == 0 {
        m >>= 1;
        e += 1;
    }
    (sign * m, e)
}

fn div_floor_i128(a: i128, b: i128) -> i128 {
    Integer::div_floor(&a, &b)
}

impl RealEval {
    pub fn new(param: RealParam) -> Self {
        let fast = match &param {
            RealParam::Rational(r) => match (r.numer().to_i128(), r.denom().to_i128()) {
                (Some(n), Some(d)) => Fast::Rat { n, d },
                _ => Fast::Big,
            },
            RealParam::Quadratic(q) => {
                match (q.a().to_i128(), q.b().to_i128(), q.c().to_i128(), q.d().to_i128()) {
                    (Some(a), Some(b), Some(c), Some(d)) => {
                        Fast::Quad { a, b, c, d, sqrt_d: (d as f64).sqrt() }
                    }
                    _ => Fast::Big,
                }
            }
            RealParam::Float(x) => {
                let (m, e) = dyadic_parts(*x);
                Fast::Dyadic { m, e }
            }
        };
        let ulp = match &param {
            RealParam::Float(x) if *x != 0.0 => {
                let a = x.abs();
                f64::from_bits(a.to_bits() + 1) - a
            }
            _ => 0.0,
        };
        RealEval { param, fast, ulp }
    }

    pub fn param(&self) -> &RealParam {
        &self.param
    }

    pub(crate) fn check_precision(&self, q: i128) -> Result<()> {
        if self.ulp > 0.0 && (q.unsigned_abs() as f64) * self.ulp >= 1.0 {
            return Err(Error::PrecisionLoss(format!(
                "q = {q} times ulp(u) = {:e} leaves no fractional bits",
                self.ulp
            )));
        }
        Ok(())
    }

    /// `floor(q u)`.
    pub fn floor_mul(&self, q: i128) -> Result<i128> {
        self.check_precision(q)?;
        if let Some(f) = self.floor_fast(q) {
            return Ok(f);
        }
        let f = self.floor_mul_big(&BigInt::from(q))?;
        f.to_i128().ok_or(Error::HorizonOverflow(q.unsigned_abs() as u64))
    }

    fn floor_fast(&self, q: i128) -> Option<i128> {
        match self.fast {
            Fast::Rat { n, d } => Some(div_floor_i128(q.checked_mul(n)?, d)),
            Fast::Quad { a, b, c, d, .. } => {
                let qa = q.checked_mul(a)?;
                let qb = q.checked_mul(b)?;
                let sq = (qb.unsigned_abs()).checked_mul(qb.unsigned_abs())?.checked_mul(d as u128)?;
                let s = sq.sqrt() as i128;
                if qb >= 0 {
                    Some(div_floor_i128(qa.checked_add(s)?, c))
                } else {
                    Some(div_floor_i128(qa.checked_sub(s)?.checked_sub(1)?, c))
                }
            }
            Fast::Dyadic { m, e } => {
                let qm = q.checked_mul(m)?;
                if e >= 0 {
                    if e >= 126 {
                        return None;
                    }
                    qm.checked_mul(1i128 << e)
                } else if e > -127 {
                    Some(qm >> (-e))
                } else {
                    Some(if qm < 0 { -1 } else { 0 })
                }
            }
            Fast::Big => None,
        }
    }

    pub fn floor_mul_big(&self, q: &BigInt) -> Result<BigInt> {
        Ok(match &self.param {
            RealParam::Rational(r) => (r * BigRational::from_integer(q.clone())).floor().to_integer(),
            RealParam::Quadratic(s) => {
                if q.is_zero() {
                    BigInt::zero()
                } else {
                    s.floor_mul(q)
                }
            }
            RealParam::Float(x) => {
                let r = BigRational::from_f64(*x).expect("finite float");
                (r * BigRational::from_integer(q.clone())).floor().to_integer()
            }
        })
    }

    /// `q u - m` in binary64, accurate to a few ulps of the result.
    pub fn offset(&self, q: i128, m: i128) -> Result<f64> {
        self.check_precision(q)?;
        if let Some(x) = self.offset_fast(q, m) {
            return Ok(x);
        }
        Ok(self.offset_ext_big(&BigInt::from(q), &BigInt::from(m)).to_f64())
    }

    fn offset_fast(&self, q: i128, m: i128) -> Option<f64> {
        match self.fast {
            Fast::Rat { n, d } => {
                let num = q.checked_mul(n)?.checked_sub(m.checked_mul(d)?)?;
                Some(num as f64 / d as f64)
            }
            Fast::Quad { a, b, c, d, sqrt_d } => {
                let big_a = q.checked_mul(a)?.checked_sub(m.checked_mul(c)?)?;
                let big_b = q.checked_mul(b)?;
                let (fa, fb, fc) = (big_a as f64, big_b as f64, c as f64);
                if big_a == 0 || (big_a > 0) == (big_b > 0) {
                    Some((fa + fb * sqrt_d) / fc)
                } else {
                    let num = big_a.checked_mul(big_a)?.checked_sub(big_b.checked_mul(big_b)?.checked_mul(d)?)?;
                    Some(num as f64 / (fc * (fa - fb * sqrt_d)))
                }
            }
            Fast::Dyadic { m: mu, e } => {
                if e >= 0 {
                    let n = q.checked_mul(mu)?.checked_mul(1i128.checked_shl(e as u32)?)?;
                    Some(n.checked_sub(m)? as f64)
                } else {
                    if e <= -120 {
                        return None;
                    }
                    let n = q.checked_mul(mu)?.checked_sub(m.checked_mul(1i128 << (-e))?)?;
                    Some(n as f64 * 2f64.powi(e))
                }
            }
            Fast::Big => None,
        }
    }

    /// `q u - m` with [`EXT_FRAC_BITS`] fractional bits.
    pub fn offset_ext(&self, q: i128, m: i128) -> Result<ExtReal> {
        self.check_precision(q)?;
        Ok(self.offset_ext_big(&BigInt::from(q), &BigInt::from(m)))
    }

    pub fn offset_ext_big(&self, q: &BigInt, m: &BigInt) -> ExtReal {
        match &self.param {
            RealParam::Rational(r) => {
                let num = q * r.numer() - m * r.denom();
                ExtReal::from_ratio(&num, r.denom())
            }
            RealParam::Quadratic(s) => s.offset_ext(q, m),
            RealParam::Float(x) => {
                let (mu, e) = dyadic_parts(*x);
                let k = EXT_FRAC_BITS as i64 + e as i64;
                // (q mu 2^e - m) 2^K
                let (num, shift) = if e >= 0 {
                    (q * BigInt::from(mu) * (BigInt::from(1) << e as usize) - m, EXT_FRAC_BITS as i64)
                } else {
                    (q * BigInt::from(mu) - (m << (-e) as usize), k)
                };
                if shift >= 0 {
                    ExtReal::from_mantissa(num << shift as usize)
                } else {
                    ExtReal::from_mantissa(num.div_floor(&(BigInt::from(1) << (-shift) as usize)))
                }
            }
        }
    }

    /// Signed `q u - m` for big `q`, `m`, in binary64.
    pub fn offset_big(&self, q: &BigInt, m: &BigInt) -> f64 {
        if let (Some(qs), Some(ms)) = (q.to_i128(), m.to_i128()) {
            if let Some(x) = self.offset_fast(qs, ms) {
                return x;
            }
        }
        self.offset_ext_big(q, m).to_f64()
    }

    /// `<q u>` together with the nearest integer `m` (ties go down).
    pub fn dist_nearest(&self, q: i128) -> Result<(f64, i128)> {
        let f = self.floor_mul(q)?;
        let lo = self.offset(q, f)?;
        let hi = -self.offset(q, f + 1)?;
        Ok(if lo <= hi { (lo.abs(), f) } else { (hi.abs(), f + 1) })
    }

    /// [`RealEval::dist_nearest`] in extended precision.
    pub fn dist_nearest_ext(&self, q: i128) -> Result<(ExtReal, i128)> {
        let f = self.floor_mul(q)?;
        let lo = self.offset_ext(q, f)?;
        let hi = self.offset_ext(q, f + 1)?.abs();
        Ok(if lo <= hi { (lo.abs(), f) } else { (hi, f + 1) })
    }
}

impl From<RealParam> for RealEval {
    fn from(p: RealParam) -> Self {
        RealEval::new(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn exact_offset(u: &BigRational, q: i128, m: i128) -> f64 {
        (u * BigRational::from_integer(q.into()) - BigRational::from_integer(m.into())).to_f64().unwrap()
    }

    #[test]
    fn quadratic_offsets() {
        let e = RealEval::new(RealParam::Quadratic(QuadIrr::sqrt(2).unwrap()));
        assert_eq!(e.floor_mul(470832).unwrap(), 665856);
        let off = e.offset(470832, 665857).unwrap();
        let expect = -7.509119826032946e-7;
        assert!(((off - expect) / expect).abs() < 1e-14, "{off}");
        let ext = e.offset_ext(470832, 665857).unwrap().to_f64();
        assert!(((ext - off) / off).abs() < 1e-14);
        assert_eq!(e.floor_mul(-1).unwrap(), -2);
        let far = e.floor_mul(i64::MAX as i128 * 1000).unwrap();
        assert!(far > 0);
    }

    #[test]
    fn rational_and_float_agree_exactly() {
        let x = 0.123456f64;
        let r = BigRational::from_f64(x).unwrap();
        let f = RealEval::new(RealParam::Float(x));
        let g = RealEval::new(RealParam::Rational(r.clone()));
        for q in [1i128, 7, 999_983, 123_456_789] {
            let m = f.floor_mul(q).unwrap();
            assert_eq!(m, g.floor_mul(q).unwrap());
            assert_eq!(f.offset_ext(q, m).unwrap(), g.offset_ext(q, m).unwrap());
            let ex = exact_offset(&r, q, m);
            assert!((f.offset(q, m).unwrap() - ex).abs() <= ex.abs() * 1e-15);
        }
    }

    #[test]
    fn float_precision_limit() {
        let f = RealEval::new(RealParam::Float(0.5 + f64::EPSILON));
        assert!(f.floor_mul(1 << 40).is_ok());
        assert!(matches!(f.floor_mul(1 << 53), Err(Error::PrecisionLoss(_))));
    }

    #[test]
    fn nearest_distance() {
        let e = RealEval::new(RealParam::Rational(BigRational::new(1.into(), 3.into())));
        assert_eq!(e.dist_nearest(3).unwrap(), (0.0, 1));
        let (d, m) = e.dist_nearest(2).unwrap();
        assert_eq!(m, 1);
        assert!((d - 1.0 / 3.0).abs() < 1e-16);
    }

    proptest! {
        #[test]
        fn fast_matches_big(a in -20i64..20, b in 1i64..10, c in 1i64..10, d in 2u64..50,
                            q in -1_000_000i64..1_000_000) {
            let r = (d as f64).sqrt() as u64;
            prop_assume!(r * r != d);
            let u = QuadIrr::new(a, b, c, d).unwrap();
            let e = RealEval::new(RealParam::Quadratic(u.clone()));
            let q = q as i128;
            let f = e.floor_mul(q).unwrap();
            prop_assert_eq!(BigInt::from(f), e.floor_mul_big(&BigInt::from(q)).unwrap());
            for m in [f, f + 1] {
                let fast = e.offset(q, m).unwrap();
                let ext = e.offset_ext(q, m).unwrap().to_f64();
                prop_assert!((fast - ext).abs() <= ext.abs() * 1e-13);
            }
        }
    }
}
