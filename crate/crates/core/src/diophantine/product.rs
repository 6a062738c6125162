use std::cmp::Ordering;

use num_bigint::BigInt;

use super::{PAdicEval, RealEval, RealParam};
use crate::error::{Error, Result};
use crate::padic::{split_i128, DSeq, ExtReal, PrecisionMode, Prime};

/// A product value. `ext` carries the extended evaluation whenever the
/// precision mode asks for it; `upper_bound` marks values whose p-adic
/// factor vanished at working precision and is only bounded above.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductValue {
    pub value: f64,
    pub ext: Option<ExtReal>,
    pub upper_bound: bool,
}

impl ProductValue {
    pub fn zero() -> Self {
        ProductValue { value: 0.0, ext: Some(ExtReal::zero()), upper_bound: false }
    }

    /// Orders by the extended value when both sides have one.
    pub fn cmp_value(&self, other: &Self) -> Ordering {
        match (&self.ext, &other.ext) {
            (Some(a), Some(b)) => a.cmp(b),
            _ => self.value.total_cmp(&other.value),
        }
    }

    pub fn lt(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Less
    }
}

/// `mult * <q u>` for an integer multiplier.
fn scaled_distance(u: &RealEval, q: i128, mult: u128, mode: PrecisionMode) -> Result<ProductValue> {
    let (d, m) = u.dist_nearest(q)?;
    let value = mult as f64 * d;
    let ext = if mode.wants_extended(value) {
        let e = u.offset_ext(q, m)?.abs();
        Some(e.mul_int(&BigInt::from(mult)))
    } else {
        None
    };
    Ok(ProductValue { value, ext, upper_bound: false })
}

fn positive(q: u64) -> Result<i128> {
    if q == 0 {
        return Err(Error::InvalidInput("q must be a positive integer".into()));
    }
    Ok(q as i128)
}

/// `q |q|_p` as an integer: `q` with every factor `p` removed.
#[inline]
pub fn mt_multiplier(q: u64, p: Prime) -> u128 {
    split_i128(q as i128, p).0 as u128
}

/// `q |q|_p1 |q|_p2` as an integer.
#[inline]
pub fn furstenberg_multiplier(q: u64, p1: Prime, p2: Prime) -> u128 {
    let (a, _) = split_i128(q as i128, p1);
    split_i128(a, p2).0 as u128
}

/// `q |q|_D` as an integer.
#[inline]
pub fn dadic_multiplier(q: u64, d: &DSeq) -> u128 {
    q as u128 / d.largest_dividing_u128(q as u128).expect("q > 0")
}

/// `|q| |q|_p <qu>`.
pub fn mt_product(u: &RealEval, q: u64, p: Prime, mode: PrecisionMode) -> Result<ProductValue> {
    let qi = positive(q)?;
    scaled_distance(u, qi, mt_multiplier(q, p), mode)
}

/// `|q| |q|_p1 |q|_p2 <qu>`.
pub fn furstenberg_product(
    u: &RealEval,
    q: u64,
    p1: Prime,
    p2: Prime,
    mode: PrecisionMode,
) -> Result<ProductValue> {
    if p1 == p2 {
        return Err(Error::InvalidInput("the two primes must differ".into()));
    }
    let qi = positive(q)?;
    scaled_distance(u, qi, furstenberg_multiplier(q, p1, p2), mode)
}

/// `|q| |q|_D <qu>`.
pub fn dadic_product(u: &RealEval, q: u64, d: &DSeq, mode: PrecisionMode) -> Result<ProductValue> {
    let qi = positive(q)?;
    scaled_distance(u, qi, dadic_multiplier(q, d), mode)
}

/// `|q| |qu - q0| |qv - q0|_p`.
pub fn gmt_product(
    u: &RealEval,
    v: &PAdicEval,
    q: i128,
    q0: i128,
    mode: PrecisionMode,
) -> Result<ProductValue> {
    if q == 0 && q0 == 0 {
        return Err(Error::InvalidInput("(q, q0) = (0, 0)".into()));
    }
    if q == 0 {
        return Ok(ProductValue::zero());
    }
    let nb = v.linear_norm(q, q0);
    if nb.vanishes {
        return Ok(ProductValue::zero());
    }
    let p = v.prime();
    let off = u.offset(q, q0)?;
    let scale = (p.get() as f64).powi(-(nb.exponent as i32));
    let value = q.unsigned_abs() as f64 * off.abs() * scale;
    let ext = if mode.wants_extended(value) || off == 0.0 {
        let e = u.offset_ext(q, q0)?.abs().mul_int(&BigInt::from(q.unsigned_abs()));
        Some(scale_by_prime_power(&e, p, nb.exponent))
    } else {
        None
    };
    Ok(ProductValue { value, ext, upper_bound: !nb.exact })
}

fn scale_by_prime_power(x: &ExtReal, p: Prime, k: i64) -> ExtReal {
    let pk = num_traits::pow(BigInt::from(p.get()), k.unsigned_abs() as usize);
    if k >= 0 {
        x.div_int(&pk)
    } else {
        x.mul_int(&pk)
    }
}

/// Which side of the reduction argument a triple falls on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductionBranch {
    /// `|q/u| >= 2|q0|`: the chain of lower bounds applies.
    Large,
    /// `|q/u| < 2|q0|`.
    Small,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReductionVerdict {
    pub branch: ReductionBranch,
    /// `|q0| |q/u - q0| |q|_p`.
    pub product: f64,
    /// The intermediate bounds `|q/u - q0||q|_p`, `|q/u||q|_p / 2`, `1/(2|u|)`.
    pub chain: [f64; 3],
    /// The chain holds link by link (always true on the small branch).
    pub holds: bool,
    /// `product - 1/(2|u|)` on the large branch.
    pub margin: f64,
}

/// Checks the lower-bound chain behind the `u <-> 1/u` reduction at
/// `v = 0`: when `|q/u| >= 2|q0|`,
/// `|q0||q/u - q0||q|_p >= |q/u - q0||q|_p >= |q/u||q|_p/2 >= 1/(2|u|)`.
pub fn reduction_check(u: &RealEval, q: i128, q0: i128, p: Prime) -> Result<ReductionVerdict> {
    let uf = u.param().to_f64();
    if u.param().is_zero() || q0 == 0 {
        return Err(Error::InvalidInput("reduction check needs u != 0 and q0 != 0".into()));
    }
    // q/u - q0 = -(q0 u - q)/u, evaluated without cancellation
    let diff = (u.offset(q0, q)? / uf).abs();
    let norm_q = if q == 0 { 0.0 } else { (p.get() as f64).powi(-(split_i128(q, p).1 as i32)) };
    let ratio = (q as f64 / uf).abs();
    let product = q0.unsigned_abs() as f64 * diff * norm_q;
    let c1 = diff * norm_q;
    let c2 = 0.5 * ratio * norm_q;
    let c3 = 1.0 / (2.0 * uf.abs());
    let large = ratio >= 2.0 * q0.unsigned_abs() as f64;
    // relative slack for the binary64 evaluation of each link
    let tol = |x: f64| x * 1e-12;
    let holds = !large
        || (product + tol(product) >= c1 && c1 + tol(c1) >= c2 && c2 + tol(c2) >= c3);
    Ok(ReductionVerdict {
        branch: if large { ReductionBranch::Large } else { ReductionBranch::Small },
        product,
        chain: [c1, c2, c3],
        holds,
        margin: if large { product - c3 } else { f64::NAN },
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvarianceVerdict {
    /// `|q||q|_p1|q|_p2 <q (p1 u)>`.
    pub lhs: f64,
    /// `|qp1||qp1|_p1|qp1|_p2 <(q p1) u>`.
    pub rhs: f64,
    pub multipliers_equal: bool,
    pub difference: f64,
}

/// The scaling identity that moves `u` to `p1 u` inside `F_delta`. Both
/// sides use exact integer multipliers and the same exact real, so only
/// the final binary64 rounding can differ.
pub fn f_delta_invariance_check(u: &RealParam, q: u64, p1: Prime, p2: Prime) -> Result<InvarianceVerdict> {
    let qi = positive(q)?;
    let qp1 = q.checked_mul(p1.get()).ok_or(Error::HorizonOverflow(q))?;
    let scaled = RealEval::new(u.scaled(&BigInt::from(p1.get())));
    let base = RealEval::new(u.clone());
    let ml = furstenberg_multiplier(q, p1, p2);
    let mr = furstenberg_multiplier(qp1, p1, p2);
    let (dl, _) = scaled.dist_nearest_ext(qi)?;
    let (dr, _) = base.dist_nearest_ext(qp1 as i128)?;
    let lhs = dl.mul_int(&BigInt::from(ml)).to_f64();
    let rhs = dr.mul_int(&BigInt::from(mr)).to_f64();
    Ok(InvarianceVerdict { lhs, rhs, multipliers_equal: ml == mr, difference: (lhs - rhs).abs() })
}

/// With `v = 0` the p-adic factor is `|q0|_p`; this is the dual target of
/// the reduction, `|q0||q/u - q0||q|_p`, evaluated at the swapped pair.
pub fn gmt_dual_product(u: &RealEval, q: i128, q0: i128, p: Prime) -> Result<f64> {
    if q == 0 || u.param().is_zero() {
        return Ok(0.0);
    }
    let uf = u.param().to_f64();
    let diff = (u.offset(q0, q)? / uf).abs();
    let n = (p.get() as f64).powi(-(split_i128(q, p).1 as i32));
    Ok(q0.unsigned_abs() as f64 * diff * n)
}

impl ProductValue {
    /// `true` for an exactly vanishing product.
    pub fn is_zero(&self) -> bool {
        self.value == 0.0 && self.ext.as_ref().is_none_or(|e| e.is_zero())
    }
}
