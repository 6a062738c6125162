use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

/// A prime number, checked by trial division up to 10^6.
///
/// Inputs beyond 10^12 whose smallest factor exceeds 10^6 are accepted
/// without proof; primality is trusted input past that point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if p < 2 {
            return Err(Error::NotPrime(p));
        }
        let mut d = 2u64;
        while d <= TRIAL_DIVISION_LIMIT && d.saturating_mul(d) <= p {
            if p % d == 0 {
                return Err(Error::NotPrime(p));
            }
            d += if d == 2 { 1 } else { 2 };
        }
        Ok(Prime(p))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    /// Largest `j` with `p^j <= limit`.
    pub fn max_power_below(self, limit: u128) -> u32 {
        let p = self.0 as u128;
        let mut acc = 1u128;
        let mut j = 0;
        while let Some(next) = acc.checked_mul(p) {
            if next > limit {
                break;
            }
            acc = next;
            j += 1;
        }
        j
    }

    /// `p^j` as u128, `None` on overflow.
    pub fn pow_u128(self, j: u32) -> Option<u128> {
        (self.0 as u128).checked_pow(j)
    }
}

impl TryFrom<u64> for Prime {
    type Error = Error;
    fn try_from(p: u64) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
