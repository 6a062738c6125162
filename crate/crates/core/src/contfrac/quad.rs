use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::padic::ExtReal;

/// The exact quadratic irrational `(a + b sqrt(d)) / c`.
///
/// Normalized at construction: `d` square-free (square factors found by
/// trial division are moved into `b`), `gcd(a, b, c) = 1` and `c > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadIrr {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

/// `floor((n + s sqrt(dd)) / c)` for `c > 0`, `dd` a non-square, `s = ±1`
/// folded into the sign of `b`; exact via the integer square root.
pub(crate) fn floor_surd(a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) -> BigInt {
    debug_assert!(c.is_positive());
    let s = (b * b * d).sqrt();
    if b.is_negative() {
        (a - s - 1u32).div_floor(c)
    } else {
        (a + s).div_floor(c)
    }
}

/// Sign of `x + y sqrt(d)` for `d > 0` non-square.
pub(crate) fn sign_surd(x: &BigInt, y: &BigInt, d: &BigInt) -> Ordering {
    let sx = x.sign();
    let sy = y.sign();
    use num_bigint::Sign::*;
    match (sx, sy) {
        (NoSign, NoSign) => Ordering::Equal,
        (Plus | NoSign, Plus | NoSign) => Ordering::Greater,
        (Minus | NoSign, Minus | NoSign) => Ordering::Less,
        _ => {
            // opposite signs: compare x^2 with y^2 d, equality is impossible
            let big_x = (x * x).cmp(&(y * y * d)) == Ordering::Greater;
            match (sx, big_x) {
                (Plus, true) | (Minus, false) => Ordering::Greater,
                _ => Ordering::Less,
            }
        }
    }
}

fn is_square(n: &BigInt) -> bool {
    let r = n.sqrt();
    &(&r * &r) == n
}

impl QuadIrr {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<Self> {
        let (mut a, mut b, mut c, mut d) = (a.into(), b.into(), c.into(), d.into());
        if b.is_zero() || c.is_zero() {
            return Err(Error::InvalidInput("quadratic irrational needs b, c nonzero".into()));
        }
        if !d.is_positive() {
            return Err(Error::InvalidInput(format!("radicand {d} must be positive")));
        }
        if is_square(&d) {
            return Err(Error::NotIrrational(d.to_string()));
        }
        let mut k = BigInt::from(2);
        let limit = BigInt::from(1_000_000u32);
        while &k * &k <= d && k <= limit {
            let kk = &k * &k;
            while d.is_multiple_of(&kk) {
                d /= &kk;
                b *= &k;
            }
            k += 1u32;
        }
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        Ok(QuadIrr { a, b, c, d })
    }

    /// `sqrt(n)` for a non-square `n > 0`.
    pub fn sqrt(n: u64) -> Result<Self> {
        QuadIrr::new(0, 1, 1, n)
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }
    pub fn b(&self) -> &BigInt {
        &self.b
    }
    pub fn c(&self) -> &BigInt {
        &self.c
    }
    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        QuadIrr::new(&self.a * k, &self.b * k, self.c.clone(), self.d.clone())
            .expect("nonzero multiple of an irrational")
    }

    pub fn add_int(&self, k: &BigInt) -> Self {
        QuadIrr { a: &self.a + k * &self.c, ..self.clone() }
    }

    pub fn floor(&self) -> BigInt {
        floor_surd(&self.a, &self.b, &self.c, &self.d)
    }

    /// `floor(q * self)` without forming the scaled surd.
    pub fn floor_mul(&self, q: &BigInt) -> BigInt {
        floor_surd(&(&self.a * q), &(&self.b * q), &self.c, &self.d)
    }

    /// Exact comparison with a rational.
    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        // (a + b sqrt d)/c - n/m  has the sign of (a m - n c) + b m sqrt d
        let (n, m) = (r.numer(), r.denom());
        sign_surd(&(&self.a * m - n * &self.c), &(&self.b * m), &self.d)
    }

    pub fn to_ext(&self) -> ExtReal {
        ExtReal::from_surd(&self.a, &self.b, &self.c, &self.d)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_ext().to_f64()
    }

    /// `q * self - m` in extended precision, robust to cancellation.
    pub fn offset_ext(&self, q: &BigInt, m: &BigInt) -> ExtReal {
        let a = &self.a * q - m * &self.c;
        let b = &self.b * q;
        if a.sign() != b.sign() && !a.is_zero() {
            // a + b sqrt d = (a^2 - b^2 d) / (a - b sqrt d), no cancellation below
            let num = &a * &a - &b * &b * &self.d;
            let den = ExtReal::from_surd(&a, &-&b, &BigInt::one(), &self.d);
            let scaled = num << (2 * crate::padic::EXT_FRAC_BITS as usize);
            let m = scaled.div_floor(&(den.mantissa() * &self.c));
            ExtReal::from_mantissa(m)
        } else {
            ExtReal::from_surd(&a, &b, &self.c, &self.d)
        }
    }
}

impl fmt::Display for QuadIrr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.b.is_negative() { '-' } else { '+' };
        write!(f, "({} {} {}*sqrt({}))/{}", self.a, sign, self.b.abs(), self.d, self.c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn normalizes() {
        let q = QuadIrr::new(2, 2, -4, 8).unwrap();
        // (2 + 2 sqrt 8)/(-4) = (-1 - 2 sqrt 2)/2
        assert_eq!((q.a(), q.b(), q.c(), q.d()), (&b(-1), &b(-2), &b(2), &b(2)));
        assert!(matches!(QuadIrr::new(1, 1, 1, 9), Err(Error::NotIrrational(_))));
        assert!(QuadIrr::new(1, 0, 1, 2).is_err());
    }

    #[test]
    fn exact_floor() {
        let s2 = QuadIrr::sqrt(2).unwrap();
        assert_eq!(s2.floor(), b(1));
        assert_eq!(s2.floor_mul(&b(1_000_000)), b(1_414_213));
        let neg = QuadIrr::new(0, -1, 1, 2).unwrap();
        assert_eq!(neg.floor(), b(-2));
        let phi = QuadIrr::new(1, 1, 2, 5).unwrap();
        assert_eq!(phi.floor(), b(1));
        assert_eq!(phi.mul_int(&b(-3)).floor(), b(-5));
    }

    #[test]
    fn rational_comparison() {
        let s2 = QuadIrr::sqrt(2).unwrap();
        let r = BigRational::new(b(99), b(70));
        assert_eq!(s2.cmp_rational(&r), Ordering::Less);
        let r = BigRational::new(b(140), b(99));
        assert_eq!(s2.cmp_rational(&r), Ordering::Greater);
    }

    #[test]
    fn offset_resists_cancellation() {
        let s2 = QuadIrr::sqrt(2).unwrap();
        let e = s2.offset_ext(&b(470832), &b(665857));
        // 470832 sqrt 2 - 665857 ≈ -7.509e-7
        let expect = 470832.0 * -1.5948618246068547e-12;
        assert!((e.to_f64() - expect).abs() < 1e-20);
        let f = s2.offset_ext(&b(3), &b(4));
        assert!((f.to_f64() - (3.0 * 2f64.sqrt() - 4.0)).abs() < 1e-15);
    }
}
