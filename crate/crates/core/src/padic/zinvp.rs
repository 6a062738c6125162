use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Prime;

/// An exact element `mantissa / p^exponent` of `Z[1/p]`.
///
/// Canonical form: `p ∤ mantissa` whenever `exponent > 0`, and zero is
/// stored as `0 / p^0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZInvP {
    mantissa: BigInt,
    exponent: u32,
    prime: Prime,
}

impl ZInvP {
    pub fn new(mantissa: impl Into<BigInt>, exponent: u32, prime: Prime) -> Self {
        let mut z = ZInvP { mantissa: mantissa.into(), exponent, prime };
        z.canonicalize();
        z
    }

    pub fn from_integer(n: impl Into<BigInt>, prime: Prime) -> Self {
        ZInvP { mantissa: n.into(), exponent: 0, prime }
    }

    pub fn zero(prime: Prime) -> Self {
        ZInvP::from_integer(0, prime)
    }

    /// `p^k` for any integer `k`.
    pub fn prime_power(k: i64, prime: Prime) -> Self {
        ZInvP::one(prime).mul_pow_p(k)
    }

    pub fn one(prime: Prime) -> Self {
        ZInvP::from_integer(1, prime)
    }

    fn canonicalize(&mut self) {
        if self.mantissa.is_zero() {
            self.exponent = 0;
            return;
        }
        let p = BigInt::from(self.prime.get());
        while self.exponent > 0 {
            let (q, r) = self.mantissa.div_rem(&p);
            if !r.is_zero() {
                break;
            }
            self.mantissa = q;
            self.exponent -= 1;
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.exponent == 0
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.mantissa.clone())
    }

    /// Multiplies by `p^k`, `k` of either sign.
    pub fn mul_pow_p(&self, k: i64) -> Self {
        let p = BigInt::from(self.prime.get());
        if k >= 0 {
            let k = k as u32;
            if k <= self.exponent {
                ZInvP { mantissa: self.mantissa.clone(), exponent: self.exponent - k, prime: self.prime }
            } else {
                let m = &self.mantissa * num_traits::pow(p, (k - self.exponent) as usize);
                ZInvP { mantissa: m, exponent: 0, prime: self.prime }
            }
        } else {
            ZInvP::new(self.mantissa.clone(), self.exponent + (-k) as u32, self.prime)
        }
    }

    /// p-adic valuation, `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let v = super::valuation(&self.mantissa, self.prime).expect("nonzero");
        Some(v as i64 - self.exponent as i64)
    }

    pub fn to_rational(&self) -> BigRational {
        let den = num_traits::pow(BigInt::from(self.prime.get()), self.exponent as usize);
        BigRational::new(self.mantissa.clone(), den)
    }

    pub fn to_f64(&self) -> f64 {
        let m = self.mantissa.to_f64().unwrap_or(f64::NAN);
        m / (self.prime.get() as f64).powi(self.exponent as i32)
    }

    /// Both operands over the common denominator `p^e`.
    fn aligned(&self, other: &ZInvP) -> (BigInt, BigInt, u32) {
        assert_eq!(self.prime, other.prime, "mixed primes in Z[1/p] arithmetic");
        let p = BigInt::from(self.prime.get());
        let e = self.exponent.max(other.exponent);
        let a = &self.mantissa * num_traits::pow(p.clone(), (e - self.exponent) as usize);
        let b = &other.mantissa * num_traits::pow(p, (e - other.exponent) as usize);
        (a, b, e)
    }

    pub fn abs(&self) -> Self {
        ZInvP { mantissa: self.mantissa.abs(), ..self.clone() }
    }
}

impl Add for &ZInvP {
    type Output = ZInvP;
    fn add(self, rhs: &ZInvP) -> ZInvP {
        let (a, b, e) = self.aligned(rhs);
        ZInvP::new(a + b, e, self.prime)
    }
}

impl Sub for &ZInvP {
    type Output = ZInvP;
    fn sub(self, rhs: &ZInvP) -> ZInvP {
        let (a, b, e) = self.aligned(rhs);
        ZInvP::new(a - b, e, self.prime)
    }
}

impl Mul for &ZInvP {
    type Output = ZInvP;
    fn mul(self, rhs: &ZInvP) -> ZInvP {
        assert_eq!(self.prime, rhs.prime, "mixed primes in Z[1/p] arithmetic");
        ZInvP::new(&self.mantissa * &rhs.mantissa, self.exponent + rhs.exponent, self.prime)
    }
}

impl Neg for &ZInvP {
    type Output = ZInvP;
    fn neg(self) -> ZInvP {
        ZInvP { mantissa: -&self.mantissa, ..self.clone() }
    }
}

impl fmt::Display for ZInvP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.mantissa)
        } else if self.exponent == 1 {
            write!(f, "{}/{}", self.mantissa, self.prime)
        } else {
            write!(f, "{}/{}^{}", self.mantissa, self.prime, self.exponent)
        }
    }
}

impl ZInvP {
    /// Rational value check used by tests: `self == n / d`.
    pub fn equals_ratio(&self, n: i64, d: i64) -> bool {
        self.to_rational() == BigRational::new(n.into(), d.into())
    }

    pub fn is_one(&self) -> bool {
        self.exponent == 0 && self.mantissa.is_one()
    }
}
