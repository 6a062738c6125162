use num_bigint::BigInt;
use num_traits::{FromPrimitive, One, ToPrimitive, Zero};

use super::LatticePoint;
use crate::diophantine::RealEval;
use crate::error::{Error, Result};
use crate::padic::{PAdicApprox, Prime, ZInvP};

/// A module element with its real and p-adic parts.
///
/// `q`, `q0` are coordinates relative to the point's generators, in the
/// sign convention where the real part is `(e^-t q, e^t (q u - q0))`.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeVector {
    pub q: ZInvP,
    pub q0: ZInvP,
    pub real_part: [f64; 2],
    pub padic_part: [PAdicApprox; 2],
    pub norm: f64,
    /// Both p-adic norms were certified at working precision.
    pub exact_padic: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchCap {
    /// Reduction steps before giving up on a certificate.
    pub max_steps: usize,
}

impl Default for SearchCap {
    fn default() -> Self {
        SearchCap { max_steps: 10_000 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShortestVector {
    pub norm: f64,
    pub witness: LatticeVector,
    /// The returned norm is the true minimum; otherwise an upper bound.
    pub certified: bool,
    /// Power `p^k` applied to the shortest vector of the integral sublattice.
    pub k: u32,
}

fn ln_p(p: Prime) -> f64 {
    (p.get() as f64).ln()
}

fn pow(p: Prime, k: u64) -> BigInt {
    num_traits::pow(BigInt::from(p.get()), k as usize)
}

/// Rational `(A + ...)/p^e` on a common denominator.
fn common(q: &ZInvP, q0: &ZInvP) -> (BigInt, BigInt, u32) {
    let p = q.prime();
    let e = q.exponent().max(q0.exponent());
    let a = q.mantissa() * pow(p, (e - q.exponent()) as u64);
    let b = q0.mantissa() * pow(p, (e - q0.exponent()) as u64);
    (a, b, e)
}

/// The norm `max(e^-t|q|, e^t|qu - q0|, |p^n q|_p, |p^-n (qv - q0)|_p)`
/// of the element with generator coordinates `(q, q0)`, straight from the
/// definition.
pub fn vector_norm(x: &LatticePoint, q: &ZInvP, q0: &ZInvP) -> LatticeVector {
    let (sq, sq0) = x.untwist(q, q0);
    let p = x.prime();
    let s = x.time();
    let (a, b, e) = common(&sq, &sq0);
    let u = RealEval::new(x.u().clone());
    let lp = ln_p(p);
    let r0 = (-s.t - e as f64 * lp).exp() * a.to_f64().unwrap_or(f64::INFINITY);
    let r1 = (s.t - e as f64 * lp).exp() * u.offset_big(&a, &b);
    let pq = PAdicApprox::from_zinvp(&sq).mul_pow_p(s.n);
    let lin = x.v().mul(&PAdicApprox::from_zinvp(&sq)).sub(&PAdicApprox::from_zinvp(&sq0));
    let pl = lin.mul_pow_p(-s.n);
    let (n0, n1) = (pq.norm(), pl.norm());
    let norm = r0.abs().max(r1.abs()).max(n0.value(p)).max(n1.value(p));
    LatticeVector {
        q: q.clone(),
        q0: q0.clone(),
        real_part: [r0, r1],
        exact_padic: (n0.exact || n0.vanishes) && (n1.exact || n1.vanishes),
        padic_part: [pq, pl],
        norm,
    }
}

/// Integral sublattice `M` (p-adic part in `Z_p^2`) in coefficient form:
/// a coefficient vector `c` maps to integers `(A, B)` and the real point
/// `(s1 A, s2 (A w - B))`, where `w` is `u` or `p^(2|n|) u`.
struct Integral {
    s1: f64,
    s2: f64,
    w: RealEval,
    // B = c1 * vres + c2 * modulus   (n >= 0), or B = c2 (n < 0)
    vres: BigInt,
    modulus: BigInt,
    // (A, B) -> standard (q, q0) = p^-e1 (A, B) when n >= 0, else with q = p^|n| A, q0 = p^-|n| B
    n: i64,
    p: Prime,
}

impl Integral {
    fn new(x: &LatticePoint) -> Result<Self> {
        let p = x.prime();
        let s = x.time();
        let lp = ln_p(p);
        let s1 = (-s.t - s.n as f64 * lp).exp();
        let s2 = (s.t - s.n.unsigned_abs() as f64 * lp).exp();
        if s.n >= 0 {
            let j = 2 * s.n as u32;
            let vres = if j == 0 {
                BigInt::zero()
            } else {
                x.v().residue_mod(j).map_err(|_| Error::InsufficientPAdicPrecision {
                    needed: j as i64,
                    available: x.v().absolute_precision().unwrap_or(0),
                })?
            };
            Ok(Integral {
                s1,
                s2,
                w: RealEval::new(x.u().clone()),
                vres,
                modulus: pow(p, j as u64),
                n: s.n,
                p,
            })
        } else {
            let k = 2 * s.n.unsigned_abs();
            Ok(Integral {
                s1,
                s2,
                w: RealEval::new(x.u().scaled(&pow(p, k))),
                vres: BigInt::zero(),
                modulus: BigInt::one(),
                n: s.n,
                p,
            })
        }
    }

    fn ab(&self, c: &[BigInt; 2]) -> (BigInt, BigInt) {
        if self.n >= 0 {
            (c[0].clone(), &c[0] * &self.vres + &c[1] * &self.modulus)
        } else {
            (c[0].clone(), c[1].clone())
        }
    }

    fn coords(&self, c: &[BigInt; 2]) -> [f64; 2] {
        let (a, b) = self.ab(c);
        [self.s1 * a.to_f64().unwrap_or(f64::INFINITY), self.s2 * self.w.offset_big(&a, &b)]
    }

    /// Standard `(q, q0)` of `p^k` times the element with coefficients `c`.
    fn standard(&self, c: &[BigInt; 2], k: u32) -> (ZInvP, ZInvP) {
        let (a, b) = self.ab(c);
        let (ea, eb) = if self.n >= 0 { (-self.n, -self.n) } else { (-self.n, self.n) };
        let qa = ZInvP::from_integer(a, self.p).mul_pow_p(ea + k as i64);
        let qb = ZInvP::from_integer(b, self.p).mul_pow_p(eb + k as i64);
        (qa, qb)
    }
}

fn dot(x: [f64; 2], y: [f64; 2]) -> f64 {
    x[0] * y[0] + x[1] * y[1]
}

fn sup(x: [f64; 2]) -> f64 {
    x[0].abs().max(x[1].abs())
}

fn sub_mul(b: &[BigInt; 2], k: &BigInt, a: &[BigInt; 2]) -> [BigInt; 2] {
    [&b[0] - k * &a[0], &b[1] - k * &a[1]]
}

/// Lagrange reduction of the coefficient basis with coordinates
/// re-evaluated exactly at every step. Returns the basis and whether it
/// met the reducedness conditions within `cap`.
fn reduce(m: &Integral, cap: SearchCap) -> ([[BigInt; 2]; 2], bool) {
    let mut b1 = [BigInt::one(), BigInt::zero()];
    let mut b2 = [BigInt::zero(), BigInt::one()];
    let mut x1 = m.coords(&b1);
    let mut x2 = m.coords(&b2);
    for _ in 0..cap.max_steps {
        if dot(x1, x1) > dot(x2, x2) {
            std::mem::swap(&mut b1, &mut b2);
            std::mem::swap(&mut x1, &mut x2);
        }
        let mu = dot(x1, x2) / dot(x1, x1);
        let k = mu.round();
        if k == 0.0 {
            let reduced = dot(x1, x1) <= dot(x2, x2) * (1.0 + 1e-9) && mu.abs() <= 0.5 + 1e-9;
            return ([b1, b2], reduced);
        }
        let kb = BigInt::from_f64(k).expect("finite multiplier");
        b2 = sub_mul(&b2, &kb, &b1);
        x2 = m.coords(&b2);
    }
    ([b1, b2], false)
}

/// Shortest sup-norm vector of the integral lattice: short combinations
/// `y1 b1 + y2 b2` of a reduced basis. For a reduced basis a vector no
/// longer than `b1` in sup norm has `|y1| <= 2`, `|y2| <= 1`; the range
/// searched is one wider on each side.
fn shortest_integral(m: &Integral, basis: &[[BigInt; 2]; 2]) -> ([BigInt; 2], f64) {
    let mut best: Option<([BigInt; 2], f64)> = None;
    for y2 in 0..=2i64 {
        for y1 in -3..=3i64 {
            if y2 == 0 && y1 <= 0 {
                continue;
            }
            let (a, b) = (BigInt::from(y1), BigInt::from(y2));
            let c = [&a * &basis[0][0] + &b * &basis[1][0], &a * &basis[0][1] + &b * &basis[1][1]];
            let s = sup(m.coords(&c));
            if best.as_ref().is_none_or(|(_, v)| s < *v) {
                best = Some((c, s));
            }
        }
    }
    best.expect("nonempty search")
}

/// Shortest nonzero element of the point's `Z[1/p]`-module.
///
/// Each element is `p^k m` with `m` in the integral sublattice `M` and not
/// divisible by `p` there; its norm is `max(p^k |m|_inf, p^-k)`. The
/// minimum is therefore `min_{k >= 0} max(p^k lambda, p^-k)`, with `lambda`
/// the sup-norm minimum of the unimodular real lattice `M`.
pub fn shortest_vector_norm(x: &LatticePoint, cap: SearchCap) -> Result<ShortestVector> {
    let m = Integral::new(x)?;
    let (basis, reduced) = reduce(&m, cap);
    let (c, lambda) = shortest_integral(&m, &basis);
    let p = x.prime();
    let pf = p.get() as f64;
    // p^k lambda <= p^-k  <=>  k <= -log_p(lambda) / 2
    let kstar = if lambda < 1.0 { (-lambda.ln() / ln_p(p) / 2.0).floor().max(0.0) as u32 } else { 0 };
    let mut best: Option<(u32, f64)> = None;
    for k in [kstar, kstar + 1] {
        let v = (pf.powi(k as i32) * lambda).max(pf.powi(-(k as i32)));
        if best.is_none_or(|(_, b)| v < b) {
            best = Some((k, v));
        }
    }
    let (k, _) = best.unwrap();
    let (sq, sq0) = m.standard(&c, k);
    let (q, q0) = x.twist_coords(&sq, &sq0);
    let witness = vector_norm(x, &q, &q0);
    Ok(ShortestVector { norm: witness.norm, certified: reduced && witness.exact_padic, witness, k })
}

/// `-log` of the shortest vector norm; zero or positive.
pub fn mahler_height(x: &LatticePoint, cap: SearchCap) -> Result<f64> {
    Ok(-shortest_vector_norm(x, cap)?.norm.ln())
}

impl LatticeVector {
    /// Standard coordinates as exact rationals `(q, q0)`, for callers that
    /// recover integer witnesses.
    pub fn integer_coords(&self, scale: i64) -> Option<(BigInt, BigInt)> {
        let a = self.q.mul_pow_p(scale);
        let b = self.q0.mul_pow_p(scale);
        Some((a.to_integer()?, b.to_integer()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diophantine::RealParam;
    use crate::lattice::ConePoint;
    use proptest::prelude::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn cap() -> SearchCap {
        SearchCap::default()
    }

    #[test]
    fn identity_has_norm_one() {
        let x = LatticePoint::identity(p(3));
        let sv = shortest_vector_norm(&x, cap()).unwrap();
        assert_eq!(sv.norm, 1.0);
        assert!(sv.certified);
        assert!(sv.witness.q.is_one() && sv.witness.q0.is_zero());
        assert_eq!(sv.witness.real_part, [1.0, 0.0]);
        assert!(sv.witness.padic_part[0].is_one() && sv.witness.padic_part[1].is_zero());
        assert_eq!(mahler_height(&x, cap()).unwrap(), 0.0);
    }

    #[test]
    fn rescaled_witness_scales_components() {
        let u = crate::contfrac::QuadIrr::sqrt(2).unwrap();
        let x = LatticePoint::x_uv(RealParam::Quadratic(u), PAdicApprox::from_integer(5, p(2)))
            .apply_alpha(ConePoint::new(3.0, 1))
            .unwrap();
        let w = shortest_vector_norm(&x, cap()).unwrap().witness;
        for k in [-1i64, 1] {
            let r = vector_norm(&x, &w.q.mul_pow_p(k), &w.q0.mul_pow_p(k));
            let f = 2f64.powi(k as i32);
            assert!((r.real_part[0] - f * w.real_part[0]).abs() <= 1e-12 * r.real_part[0].abs().max(1e-300));
            assert!((r.real_part[1] - f * w.real_part[1]).abs() <= 1e-12 * r.real_part[1].abs().max(1e-300));
            for i in 0..2 {
                let (a, b) = (r.padic_part[i].norm(), w.padic_part[i].norm());
                if !b.vanishes {
                    assert_eq!(a.exponent, b.exponent + k);
                }
            }
        }
    }

    #[test]
    fn twisted_generators_give_same_norm() {
        let u = RealParam::Rational(num_rational::BigRational::new(7.into(), 19.into()));
        let x = LatticePoint::x_uv(u, PAdicApprox::from_integer(4, p(3))).apply_alpha(ConePoint::new(1.3, -1)).unwrap();
        let base = shortest_vector_norm(&x, cap()).unwrap();
        for m in [-2i64, -1, 1, 3] {
            let y = x.with_twist(m);
            let sv = shortest_vector_norm(&y, cap()).unwrap();
            assert!((sv.norm - base.norm).abs() <= 1e-12 * base.norm, "m={m}");
            let (sq, sq0) = y.untwist(&sv.witness.q, &sv.witness.q0);
            assert!((vector_norm(&x, &sq, &sq0).norm - sv.norm).abs() <= 1e-12 * sv.norm);
        }
    }

    #[test]
    fn height_grows_at_most_linearly() {
        let u = RealParam::Quadratic(crate::contfrac::QuadIrr::sqrt(3).unwrap());
        let x = LatticePoint::x_uv(u, PAdicApprox::zero(p(2)));
        let h0 = mahler_height(&x, cap()).unwrap();
        for i in 1..40 {
            let t = i as f64 * 0.5;
            let h = mahler_height(&x.apply_alpha(ConePoint::new(t, 0)).unwrap(), cap()).unwrap();
            assert!(h >= 0.0 && h <= h0 + t + 1e-12, "t={t} h={h}");
        }
    }

    #[test]
    fn rational_u_escapes() {
        let u = RealParam::Rational(num_rational::BigRational::new(3.into(), 7.into()));
        let x = LatticePoint::x_uv(u, PAdicApprox::zero(p(2)));
        let h = |t: f64| mahler_height(&x.apply_alpha(ConePoint::new(t, 0)).unwrap(), cap()).unwrap();
        // the vector (7, 3) has norm max(7 e^-t p^k, p^-k): rate 1/2 in t
        assert!(h(20.0) > h(10.0) + 4.0);
        assert!(h(40.0) > h(20.0) + 8.0);
    }

    #[test]
    fn insufficient_digits() {
        let v = PAdicApprox::from_digits(p(2), 0, &[1, 0, 1]).unwrap();
        let x = LatticePoint::x_uv(RealParam::Float(0.5), v).apply_alpha(ConePoint::new(3.0, 2)).unwrap();
        assert!(matches!(shortest_vector_norm(&x, cap()), Err(Error::InsufficientPAdicPrecision { .. })));
    }

    /// Direct enumeration of `p^m (a, b)`, `|a|, |b| <= 1000`, `|m| <= 5`,
    /// with `v` an integer, in binary64 throughout.
    fn naive(u: f64, v: i64, p: u64, t: f64, n: i64) -> f64 {
        let pf = p as f64;
        let pnorm = |x: i128, shift: i64| -> f64 {
            if x == 0 {
                return 0.0;
            }
            let mut k = 0;
            let mut y = x;
            while y % p as i128 == 0 {
                y /= p as i128;
                k += 1;
            }
            pf.powi(-(k + shift) as i32)
        };
        let mut best: f64 = 1.0;
        for m in -5i64..=5 {
            let sc = pf.powi(m as i32);
            for a in -1000i64..=1000 {
                let r0 = (-t).exp() * sc * (a as f64).abs();
                if r0 >= best {
                    continue;
                }
                let width = best / (t.exp() * sc);
                let c = a as f64 * u;
                let lo = (c - width).floor() as i64;
                let hi = (c + width).ceil() as i64;
                for b in lo.max(-1000)..=hi.min(1000) {
                    if a == 0 && b == 0 {
                        continue;
                    }
                    let r1 = t.exp() * sc * (a as f64 * u - b as f64).abs();
                    let n0 = if a == 0 { 0.0 } else { pnorm(a as i128, m + n) };
                    let lin = a as i128 * v as i128 - b as i128;
                    let n1 = pnorm(lin, m - n);
                    let nm = r0.max(r1).max(n0).max(n1);
                    if nm < best {
                        best = nm;
                    }
                }
            }
        }
        best
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn matches_naive_enumeration(num in -2000i64..2000, v in 0i64..300, pi in 0usize..3,
                                     t in -2.0f64..2.0, n in -2i64..=2) {
            let pr = [2u64, 3, 5][pi];
            // dyadic u, exactly representable
            let uf = num as f64 / 1024.0 + 1.0 / 3.0;
            let uf = (uf * 2f64.powi(20)).round() / 2f64.powi(20);
            let x = LatticePoint::x_uv(RealParam::Float(uf), PAdicApprox::from_integer(v, p(pr)))
                .apply_alpha(ConePoint::new(t, n)).unwrap();
            let sv = shortest_vector_norm(&x, cap()).unwrap();
            let oracle = naive(uf, v, pr, t, n);
            prop_assert!(sv.certified);
            prop_assert!((sv.norm - oracle).abs() <= 1e-9 * oracle, "lattice {} naive {}", sv.norm, oracle);
        }
    }
}
