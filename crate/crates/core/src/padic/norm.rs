use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::Prime;
use crate::error::{Error, Result};

/// Exact p-adic valuation of a nonzero machine integer.
pub fn valuation_i128(q: i128, p: Prime) -> Result<u32> {
    if q == 0 {
        return Err(Error::NormOfZero);
    }
    Ok(split_i128(q, p).1)
}

/// Writes `q = unit * p^k` with `p ∤ unit`; `q` must be nonzero.
#[inline]
pub fn split_i128(mut q: i128, p: Prime) -> (i128, u32) {
    debug_assert!(q != 0);
    let p = p.get() as i128;
    if p == 2 {
        let k = q.trailing_zeros();
        return (q >> k, k);
    }
    let mut k = 0;
    while q % p == 0 {
        q /= p;
        k += 1;
    }
    (q, k)
}

/// Exact p-adic valuation of a nonzero big integer.
pub fn valuation(q: &BigInt, p: Prime) -> Result<u64> {
    if q.is_zero() {
        return Err(Error::NormOfZero);
    }
    if p.get() == 2 {
        return Ok(q.trailing_zeros().unwrap_or(0));
    }
    let p = BigInt::from(p.get());
    let mut k = 0;
    let mut cur = q.clone();
    loop {
        let (quot, rem) = cur.div_rem(&p);
        if !rem.is_zero() {
            return Ok(k);
        }
        cur = quot;
        k += 1;
    }
}

/// `|q|_p = p^(-v_p(q))` as an exact rational.
pub fn padic_norm(q: impl Into<BigInt>, p: Prime) -> Result<BigRational> {
    let q = q.into();
    let k = valuation(&q, p)?;
    let den = num_traits::pow(BigInt::from(p.get()), k as usize);
    Ok(BigRational::new(BigInt::one(), den))
}

/// `|q|_p` as a float; exact for every representable power.
pub fn padic_norm_f64(q: i128, p: Prime) -> Result<f64> {
    let k = valuation_i128(q, p)?;
    Ok((p.get() as f64).powi(-(k as i32)))
}

/// Distance to the nearest integer, `min_m |z - m|`, in `[0, 1/2]`.
#[inline]
pub fn dist_nearest_int(z: f64) -> f64 {
    (z - z.round()).abs()
}

/// Distance from an exact rational to the nearest integer, exactly.
pub fn dist_nearest_int_exact(z: &BigRational) -> BigRational {
    let fl = z.floor();
    let frac = z - &fl;
    let other = BigRational::one() - &frac;
    if frac <= other {
        frac
    } else {
        other
    }
}

/// Nearest integer to an exact rational, ties rounded toward -infinity.
pub fn nearest_int_exact(z: &BigRational) -> BigInt {
    let fl = z.floor();
    let frac = z - &fl;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    if frac.abs() <= half {
        fl.to_integer()
    } else {
        fl.to_integer() + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn norm_examples() {
        assert_eq!(padic_norm(12, p(2)).unwrap(), rat(1, 4));
        assert_eq!(padic_norm(7, p(2)).unwrap(), rat(1, 1));
        assert_eq!(padic_norm(250, p(5)).unwrap(), rat(1, 125));
        assert_eq!(padic_norm(-250, p(5)).unwrap(), rat(1, 125));
    }

    #[test]
    fn zero_has_no_norm() {
        assert_eq!(padic_norm(0, p(3)), Err(Error::NormOfZero));
        assert_eq!(valuation_i128(0, p(3)), Err(Error::NormOfZero));
    }

    #[test]
    fn float_norm_matches_exact() {
        assert_eq!(padic_norm_f64(48, p(2)).unwrap(), 1.0 / 16.0);
        assert_eq!(padic_norm_f64(-45, p(3)).unwrap(), 1.0 / 9.0);
    }

    #[test]
    fn nearest_int_examples() {
        assert_eq!(dist_nearest_int(3.25), 0.25);
        assert_eq!(dist_nearest_int(7.0), 0.0);
        assert!((dist_nearest_int(-1.6) - 0.4).abs() < 1e-15);
        assert_eq!(dist_nearest_int_exact(&rat(-8, 5)), rat(2, 5));
        assert_eq!(nearest_int_exact(&rat(-8, 5)), BigInt::from(-2));
        assert_eq!(nearest_int_exact(&rat(7, 2)), BigInt::from(3));
    }

    proptest! {
        #[test]
        fn multiplicative(a in any::<i64>().prop_filter("nz", |a| *a != 0),
                          b in any::<i64>().prop_filter("nz", |b| *b != 0),
                          pi in 0usize..4) {
            let pr = p([2, 3, 5, 7][pi]);
            let ab = a as i128 * b as i128;
            prop_assert_eq!(
                padic_norm(ab, pr).unwrap(),
                padic_norm(a, pr).unwrap() * padic_norm(b, pr).unwrap()
            );
        }

        #[test]
        fn ultrametric(a in -1_000_000i64..1_000_000, b in -1_000_000i64..1_000_000, pi in 0usize..4) {
            prop_assume!(a != 0 && b != 0 && a + b != 0);
            let pr = p([2, 3, 5, 7][pi]);
            let na = padic_norm(a, pr).unwrap();
            let nb = padic_norm(b, pr).unwrap();
            let ns = padic_norm(a + b, pr).unwrap();
            let mx = if na > nb { na.clone() } else { nb.clone() };
            prop_assert!(ns <= mx);
            if na != nb {
                prop_assert_eq!(ns, mx);
            }
        }

        #[test]
        fn nearest_int_is_periodic_and_even(z in -1e6f64..1e6) {
            let d = dist_nearest_int(z);
            prop_assert!((0.0..=0.5).contains(&d));
            prop_assert!((dist_nearest_int(-z) - d).abs() == 0.0);
            let e = dist_nearest_int(z + 1.0);
            // z + 1 rounds in binary64; the defect is at most one ulp of z + 1
            prop_assert!((e - d).abs() <= f64::EPSILON * (z.abs() + 1.0));
        }
    }
}
