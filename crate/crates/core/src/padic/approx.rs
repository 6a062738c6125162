use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Prime, ZInvP};
use crate::error::{Error, Result};

/// Relative precision, in base-p digits, used when none is given.
pub const DEFAULT_PRECISION: u32 = 64;

/// A finite-precision element of `Q_p`: `p^valuation * unit` with the unit
/// known modulo `p^precision`.
///
/// Exact values (finite expansions, integers, elements of `Z[1/p]`) carry
/// their unit as a signed integer and never lose digits. The zero element
/// is flagged explicitly; an inexact zero records the absolute precision to
/// which it is known to vanish in `valuation`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PAdicApprox {
    prime: Prime,
    valuation: i64,
    unit: BigInt,
    precision: u32,
    exact: bool,
    zero: bool,
}

/// Outcome of a p-adic norm evaluation: `|x|_p = p^(-exponent)` when
/// `exact`, else only `|x|_p <= p^(-exponent)` is certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NormBound {
    pub exponent: i64,
    pub exact: bool,
    /// The value is exactly zero (only possible for exact inputs).
    pub vanishes: bool,
}

impl NormBound {
    pub fn value(&self, p: Prime) -> f64 {
        if self.vanishes {
            0.0
        } else {
            (p.get() as f64).powi(-(self.exponent as i32))
        }
    }
}

fn pow(p: Prime, k: u32) -> BigInt {
    num_traits::pow(BigInt::from(p.get()), k as usize)
}

impl PAdicApprox {
    pub fn zero(prime: Prime) -> Self {
        PAdicApprox { prime, valuation: 0, unit: BigInt::zero(), precision: 0, exact: true, zero: true }
    }

    /// Zero known only modulo `p^abs_precision`.
    pub fn zero_to(prime: Prime, abs_precision: i64) -> Self {
        PAdicApprox {
            prime,
            valuation: abs_precision,
            unit: BigInt::zero(),
            precision: 0,
            exact: false,
            zero: true,
        }
    }

    pub fn from_integer(n: impl Into<BigInt>, prime: Prime) -> Self {
        Self::exact_from(n.into(), 0, prime)
    }

    pub fn from_zinvp(z: &ZInvP) -> Self {
        Self::exact_from(z.mantissa().clone(), -(z.exponent() as i64), z.prime())
    }

    fn exact_from(n: BigInt, shift: i64, prime: Prime) -> Self {
        if n.is_zero() {
            return Self::zero(prime);
        }
        let k = super::valuation(&n, prime).expect("nonzero");
        let unit = n / pow(prime, k as u32);
        let digits = digit_count(&unit, prime);
        PAdicApprox { prime, valuation: k as i64 + shift, unit, precision: digits, exact: true, zero: false }
    }

    /// Little-endian base-p digits starting at `p^valuation`. Leading zero
    /// digits raise the valuation; the absolute precision is
    /// `valuation + digits.len()`.
    pub fn from_digits(prime: Prime, valuation: i64, digits: &[u32]) -> Result<Self> {
        if let Some(&d) = digits.iter().find(|&&d| d as u64 >= prime.get()) {
            return Err(Error::InvalidInput(format!("digit {d} out of range for p = {prime}")));
        }
        let abs = valuation + digits.len() as i64;
        let Some(first) = digits.iter().position(|&d| d != 0) else {
            return Ok(Self::zero_to(prime, abs));
        };
        let mut unit = BigInt::zero();
        for &d in digits[first..].iter().rev() {
            unit = unit * prime.get() + d;
        }
        Ok(PAdicApprox {
            prime,
            valuation: valuation + first as i64,
            unit,
            precision: (digits.len() - first) as u32,
            exact: false,
            zero: false,
        })
    }

    /// Inexact copy keeping `n` relative digits.
    pub fn truncated(&self, n: u32) -> Self {
        if self.zero {
            if self.exact {
                return Self::zero_to(self.prime, n as i64);
            }
            return self.clone();
        }
        let n = if self.exact { n } else { n.min(self.precision) };
        let m = pow(self.prime, n);
        PAdicApprox {
            unit: self.unit.mod_floor(&m),
            precision: n,
            exact: false,
            ..self.clone()
        }
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Valuation of a nonzero value; `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        (!self.zero).then_some(self.valuation)
    }

    /// Number of known unit digits. For exact values, the digit length of
    /// the unit.
    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// Largest `P` such that the value is known modulo `p^P`; `None` when
    /// exact.
    pub fn absolute_precision(&self) -> Option<i64> {
        if self.exact {
            None
        } else if self.zero {
            Some(self.valuation)
        } else {
            Some(self.valuation + self.precision as i64)
        }
    }

    /// Unit digits, least significant first. Exact negative units have
    /// infinite expansions; they are listed to `DEFAULT_PRECISION` digits.
    pub fn digits(&self) -> Vec<u32> {
        if self.zero {
            return Vec::new();
        }
        let n = if self.exact && self.unit.is_negative() {
            DEFAULT_PRECISION.max(self.precision)
        } else {
            self.precision
        };
        let p = BigInt::from(self.prime.get());
        let mut x = self.unit.mod_floor(&pow(self.prime, n));
        let mut out = Vec::with_capacity(n as usize);
        for _ in 0..n {
            let (q, r) = x.div_rem(&p);
            out.push(r.to_u32().expect("digit fits"));
            x = q;
        }
        out
    }

    /// The `i`-th digit of the expansion at `p^i`.
    pub fn digit(&self, i: i64) -> Result<u32> {
        if let Some(abs) = self.absolute_precision() {
            if i >= abs {
                return Err(Error::InsufficientPAdicPrecision { needed: i + 1, available: abs });
            }
        }
        if self.zero || i < self.valuation {
            return Ok(0);
        }
        let k = (i - self.valuation) as u32;
        let x = self.unit.mod_floor(&pow(self.prime, k + 1)) / pow(self.prime, k);
        Ok(x.to_u32().expect("digit fits"))
    }

    /// `p`-adic norm. Inexact zeros report an upper bound.
    pub fn norm(&self) -> NormBound {
        if self.zero {
            NormBound { exponent: self.valuation, exact: false, vanishes: self.exact }
        } else {
            NormBound { exponent: self.valuation, exact: true, vanishes: false }
        }
    }

    /// Representative of the value modulo `p^j`, for values in `Z_p`.
    pub fn residue_mod(&self, j: u32) -> Result<BigInt> {
        if let Some(abs) = self.absolute_precision() {
            if (j as i64) > abs {
                return Err(Error::InsufficientPAdicPrecision { needed: j as i64, available: abs });
            }
        }
        if self.zero {
            return Ok(BigInt::zero());
        }
        if self.valuation < 0 {
            return Err(Error::InvalidInput(format!(
                "residue of a non-integral p-adic number (valuation {})",
                self.valuation
            )));
        }
        let m = pow(self.prime, j);
        let shifted = &self.unit * pow(self.prime, self.valuation as u32);
        Ok(shifted.mod_floor(&m))
    }

    /// Multiplication by `p^k`.
    pub fn mul_pow_p(&self, k: i64) -> Self {
        if self.zero && self.exact {
            return self.clone();
        }
        PAdicApprox { valuation: self.valuation + k, ..self.clone() }
    }

    pub fn neg(&self) -> Self {
        if self.zero {
            return self.clone();
        }
        let unit = if self.exact {
            -&self.unit
        } else {
            (-&self.unit).mod_floor(&pow(self.prime, self.precision))
        };
        PAdicApprox { unit, ..self.clone() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.prime, rhs.prime, "mixed primes");
        let p = self.prime;
        match (self.zero, rhs.zero) {
            (true, _) if self.exact => return Self::zero(p),
            (_, true) if rhs.exact => return Self::zero(p),
            (true, true) => return Self::zero_to(p, self.valuation + rhs.valuation),
            (true, false) => return Self::zero_to(p, self.valuation + rhs.valuation),
            (false, true) => return Self::zero_to(p, self.valuation + rhs.valuation),
            _ => {}
        }
        let valuation = self.valuation + rhs.valuation;
        if self.exact && rhs.exact {
            return Self::exact_from(&self.unit * &rhs.unit, valuation, p);
        }
        let n = match (self.exact, rhs.exact) {
            (true, false) => rhs.precision,
            (false, true) => self.precision,
            _ => self.precision.min(rhs.precision),
        };
        let unit = (&self.unit * &rhs.unit).mod_floor(&pow(p, n));
        PAdicApprox { prime: p, valuation, unit, precision: n, exact: false, zero: false }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.prime, rhs.prime, "mixed primes");
        let p = self.prime;
        if self.zero && self.exact {
            return rhs.clone();
        }
        if rhs.zero && rhs.exact {
            return self.clone();
        }
        let abs = match (self.absolute_precision(), rhs.absolute_precision()) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let terms: Vec<(i64, &BigInt)> = [self, rhs]
            .into_iter()
            .filter(|x| !x.zero)
            .map(|x| (x.valuation, &x.unit))
            .collect();
        if terms.is_empty() {
            return Self::zero_to(p, abs.expect("inexact zeros"));
        }
        let m = terms.iter().map(|t| t.0).min().expect("nonempty");
        let mut s = BigInt::zero();
        for (v, u) in &terms {
            s += *u * pow(p, (*v - m) as u32);
        }
        match abs {
            None => Self::exact_from(s, m, p),
            Some(abs) => {
                if abs <= m {
                    return Self::zero_to(p, abs);
                }
                let width = (abs - m) as u32;
                let s = s.mod_floor(&pow(p, width));
                if s.is_zero() {
                    return Self::zero_to(p, abs);
                }
                let k = super::valuation(&s, p).expect("nonzero") as u32;
                PAdicApprox {
                    prime: p,
                    valuation: m + k as i64,
                    unit: s / pow(p, k),
                    precision: width - k,
                    exact: false,
                    zero: false,
                }
            }
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    /// `|q * self - q0|_p` for integers `q`, `q0`.
    pub fn linear_norm(&self, q: &BigInt, q0: &BigInt) -> NormBound {
        let qv = self.mul(&Self::from_integer(q.clone(), self.prime));
        qv.sub(&Self::from_integer(q0.clone(), self.prime)).norm()
    }

    /// Determines whether two approximations agree to their common
    /// precision.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.sub(other).zero
    }

    pub fn to_f64_norm(&self) -> f64 {
        self.norm().value(self.prime)
    }
}

fn digit_count(unit: &BigInt, p: Prime) -> u32 {
    let mut x = unit.abs();
    let mut n = 0;
    let pb = BigInt::from(p.get());
    while !x.is_zero() {
        x /= &pb;
        n += 1;
    }
    n.max(1)
}

impl fmt::Display for PAdicApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zero {
            return if self.exact { write!(f, "0") } else { write!(f, "O({}^{})", self.prime, self.valuation) };
        }
        let ds: Vec<String> = self.digits().iter().rev().map(|d| d.to_string()).collect();
        let sep = if self.prime.get() > 10 { "," } else { "" };
        let body = ds.join(sep);
        let lead = if self.exact && !self.unit.is_negative() { "" } else { "…" };
        write!(f, "{lead}{body}")?;
        if self.valuation != 0 {
            write!(f, " * {}^{}", self.prime, self.valuation)?;
        }
        Ok(())
    }
}

impl PAdicApprox {
    /// The value as an integer, for exact values in `Z`.
    pub fn to_integer(&self) -> Option<BigInt> {
        if !self.exact {
            return None;
        }
        if self.zero {
            return Some(BigInt::zero());
        }
        (self.valuation >= 0).then(|| &self.unit * pow(self.prime, self.valuation as u32))
    }

    /// True when the value is exactly one.
    pub fn is_one(&self) -> bool {
        self.exact && !self.zero && self.valuation == 0 && self.unit.is_one()
    }
}
