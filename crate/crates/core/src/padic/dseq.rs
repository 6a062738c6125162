use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A divisibility chain `1 = r_0 | r_1 | r_2 | ...` given by its ratios
/// `d_n = r_n / r_{n-1} >= 2`.
///
/// The ratios are `head` followed by `tail` repeated forever. An empty
/// tail makes the chain finite: it stops at `r_{head.len()}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DSeq {
    head: Vec<u64>,
    tail: Vec<u64>,
}

impl DSeq {
    pub fn new(head: Vec<u64>, tail: Vec<u64>) -> Result<Self> {
        if let Some(d) = head.iter().chain(tail.iter()).find(|&&d| d < 2) {
            return Err(Error::InvalidInput(format!("chain ratio {d} < 2")));
        }
        Ok(DSeq { head, tail })
    }

    /// The chain `r_n = a^n`.
    pub fn powers(a: u64) -> Result<Self> {
        DSeq::new(Vec::new(), vec![a])
    }

    pub fn head(&self) -> &[u64] {
        &self.head
    }

    pub fn tail(&self) -> &[u64] {
        &self.tail
    }

    /// `d_n` for `n >= 1`, `None` past the end of a finite chain.
    pub fn ratio(&self, n: usize) -> Option<u64> {
        assert!(n >= 1);
        let i = n - 1;
        if i < self.head.len() {
            Some(self.head[i])
        } else if self.tail.is_empty() {
            None
        } else {
            Some(self.tail[(i - self.head.len()) % self.tail.len()])
        }
    }

    /// `r_n`, `None` past the end of a finite chain.
    pub fn term(&self, n: usize) -> Option<BigInt> {
        let mut r = BigInt::one();
        for k in 1..=n {
            r *= self.ratio(k)?;
        }
        Some(r)
    }

    /// Largest `r_n` dividing `q` together with `n`.
    pub fn largest_dividing(&self, q: &BigInt) -> Result<(BigInt, usize)> {
        if q.is_zero() {
            return Err(Error::NormOfZero);
        }
        let q = q.abs();
        let mut r = BigInt::one();
        let mut n = 0;
        while let Some(d) = self.ratio(n + 1) {
            let next = &r * d;
            if next > q || !q.is_multiple_of(&next) {
                break;
            }
            r = next;
            n += 1;
        }
        Ok((r, n))
    }

    /// Fast path of [`DSeq::largest_dividing`] for machine integers.
    #[inline]
    pub fn largest_dividing_u128(&self, q: u128) -> Result<u128> {
        if q == 0 {
            return Err(Error::NormOfZero);
        }
        let mut r = 1u128;
        let mut n = 1;
        while let Some(d) = self.ratio(n) {
            let next = match r.checked_mul(d as u128) {
                Some(x) if x <= q => x,
                _ => break,
            };
            if q % next != 0 {
                break;
            }
            r = next;
            n += 1;
        }
        Ok(r)
    }
}

/// `|q|_D = inf { 1/r_n : r_n | q }`, attained at the largest dividing term.
pub fn d_adic_norm(q: impl Into<BigInt>, d: &DSeq) -> Result<BigRational> {
    let (r, _) = d.largest_dividing(&q.into())?;
    Ok(BigRational::new(BigInt::one(), r))
}

impl fmt::Display for DSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[u64]| v.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "head[{}] tail[{}]", list(&self.head), list(&self.tail))
    }
}
