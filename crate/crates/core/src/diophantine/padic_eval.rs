use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::padic::{split_i128, NormBound, PAdicApprox, Prime};

/// A compiled evaluator of `|q v - q0|_p` for one fixed `v`.
///
/// For `v` in `Z_p` a residue `V = v mod p^J` is cached in machine width;
/// `q v - q0` agrees with `q V - q0` modulo `p^J`, so any valuation below
/// `J` is read off exactly. Deeper cancellations go to the exact path.
#[derive(Clone, Debug)]
pub struct PAdicEval {
    v: PAdicApprox,
    residue: Option<(i128, i128)>,
    integer: Option<i128>,
    // v = w / p^shift with w in Z_p; the cached residue is that of w
    shift: u32,
    w_residue: Option<(i128, u32)>,
}

impl PAdicEval {
    pub fn new(v: PAdicApprox) -> Self {
        let p = v.prime();
        let integer = v.to_integer().and_then(|n| n.to_i128());
        let residue = if integer.is_none() {
            let cap = p.max_power_below(1u128 << 60);
            let j = match v.absolute_precision() {
                Some(abs) => cap.min(abs.max(0) as u32),
                None => cap,
            };
            match v.residue_mod(j) {
                Ok(r) if j > 0 => Some((r.to_i128().expect("fits"), p.pow_u128(j).unwrap() as i128)),
                _ => None,
            }
        } else {
            None
        };
        let shift = v.valuation().map_or(0, |k| (-k).max(0) as u32);
        let w = v.mul_pow_p(shift as i64);
        let w_residue = match w.to_integer().and_then(|n| n.to_i128()) {
            Some(n) => Some((n, u32::MAX)),
            None => {
                let cap = p.max_power_below(1u128 << 60);
                let j = cap.min(w.absolute_precision().unwrap_or(0).max(0) as u32);
                w.residue_mod(j).ok().and_then(|r| r.to_i128()).map(|r| (r, j))
            }
        };
        PAdicEval { v, residue, integer, shift, w_residue }
    }

    /// Digits of `qv` available for the candidate ladder: `Some((r_j, depth))`
    /// gives `qv mod p^j = r_j` for every `j <= depth`, or `None` when
    /// `qv` is not in `Z_p`. The returned function maps `j` to `r_j`.
    pub fn scaled_residues(&self, q: i128) -> Option<ScaledResidues> {
        let p = self.prime();
        let (w, depth) = self.w_residue?;
        let k = if q == 0 { u32::MAX } else { split_i128(q, p).1 };
        if k < self.shift {
            return None;
        }
        // q v = (q / p^shift) w
        let pb = p.get() as i128;
        let factor = q / pb.checked_pow(self.shift)?;
        Some(ScaledResidues { p: pb, factor, w, depth })
    }

    pub fn approx(&self) -> &PAdicApprox {
        &self.v
    }

    pub fn prime(&self) -> Prime {
        self.v.prime()
    }

    /// `v mod p^j` when it is known.
    pub fn residue_mod(&self, j: u32) -> Option<BigInt> {
        self.v.residue_mod(j).ok()
    }

    /// Number of reliable base-p digits of `v` in `Z_p`, `None` if unlimited.
    pub fn reliable_digits(&self) -> Option<i64> {
        if self.integer.is_some() {
            None
        } else {
            Some(self.v.absolute_precision().unwrap_or(0))
        }
    }

    pub fn linear_norm(&self, q: i128, q0: i128) -> NormBound {
        let p = self.prime();
        if let Some(n) = self.integer {
            if let Some(x) = q.checked_mul(n).and_then(|x| x.checked_sub(q0)) {
                if x == 0 {
                    return NormBound { exponent: 0, exact: true, vanishes: true };
                }
                return NormBound { exponent: split_i128(x, p).1 as i64, exact: true, vanishes: false };
            }
        }
        if let Some((r, pj)) = self.residue {
            let x = ((q % pj) * r - q0 % pj) % pj;
            if x != 0 {
                return NormBound { exponent: split_i128(x, p).1 as i64, exact: true, vanishes: false };
            }
        }
        self.v.linear_norm(&BigInt::from(q), &BigInt::from(q0))
    }
}

/// Residues of `q v` modulo powers of `p`.
pub struct ScaledResidues {
    p: i128,
    factor: i128,
    w: i128,
    depth: u32,
}

impl ScaledResidues {
    /// Deepest level `j` at which the residue is known (`u32::MAX` when
    /// `v` is an exact integer).
    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// `q v mod p^j` for `j <= depth`, `None` if `p^j` overflows.
    pub fn residue(&self, j: u32) -> Option<i128> {
        let m = self.p.checked_pow(j)?;
        let f = self.factor.rem_euclid(m);
        let w = self.w.rem_euclid(m);
        f.checked_mul(w).map(|x| x.rem_euclid(m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn integer_fast_path_is_exact() {
        let e = PAdicEval::new(PAdicApprox::from_integer(-5, p(3)));
        assert_eq!(e.linear_norm(2, -10), NormBound { exponent: 0, exact: true, vanishes: true });
        assert_eq!(e.linear_norm(1, 4).exponent, 2);
    }

    #[test]
    fn scaled_residues_follow_integer_multiples() {
        let e = PAdicEval::new(PAdicApprox::from_integer(13, p(2)));
        let r = e.scaled_residues(3).unwrap();
        assert_eq!(r.residue(4), Some(39 % 16));
        // v = 5/4: qv in Z_2 only when 4 | q
        let f = PAdicEval::new(PAdicApprox::from_digits(p(2), -2, &[1, 0, 1, 0, 0, 1]).unwrap());
        assert!(f.scaled_residues(2).is_none());
        let r = f.scaled_residues(12).unwrap();
        // 12 v = 3 w with w = 1 + 4 + 32 = 37 to 6 digits
        assert_eq!(r.depth(), 6);
        assert_eq!(r.residue(6), Some(111 % 64));
    }

    #[test]
    fn residue_path_matches_exact_path() {
        let v = PAdicApprox::from_digits(p(2), 0, &[1, 0, 1, 1, 0, 1, 1, 1, 0, 0, 1]).unwrap();
        let e = PAdicEval::new(v.clone());
        for q in -40i128..40 {
            for q0 in -40i128..40 {
                let fast = e.linear_norm(q, q0);
                let slow = v.linear_norm(&BigInt::from(q), &BigInt::from(q0));
                assert_eq!(fast, slow, "q={q} q0={q0}");
            }
        }
    }
}
