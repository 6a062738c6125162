use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::PointSet1D;
use crate::contfrac::Convergents;
use crate::diophantine::{gmt_best_for_q, gmt_product, PAdicEval, Q0Window, RealEval, RealParam};
use crate::error::{Error, Result};
use crate::padic::{PAdicApprox, PrecisionMode};

/// Equally spaced `u` values on `[lo, hi]`. With `exact` the points are
/// the rationals `lo + (hi - lo) i / (n - 1)`; otherwise the binary64
/// values of the same expression, read as exact dyadics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UGrid {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
    pub exact: bool,
}

impl UGrid {
    pub fn new(lo: f64, hi: f64, n: usize) -> Self {
        UGrid { lo, hi, n, exact: false }
    }

    pub fn params(&self) -> Result<Vec<RealParam>> {
        if self.n == 0 || !(self.lo <= self.hi) {
            return Err(Error::InvalidInput(format!("empty u grid {}..{} x {}", self.lo, self.hi, self.n)));
        }
        let n1 = (self.n.max(2) - 1) as f64;
        if !self.exact {
            return Ok((0..self.n).map(|i| RealParam::Float(self.lo + (self.hi - self.lo) * i as f64 / n1)).collect());
        }
        let to_r = |x: f64| BigRational::from_f64(x).ok_or_else(|| Error::InvalidInput(format!("{x} is not finite")));
        let (lo, hi) = (to_r(self.lo)?, to_r(self.hi)?);
        let den = BigInt::from(self.n.max(2) - 1);
        Ok((0..self.n)
            .map(|i| {
                let step = BigRational::new(BigInt::from(i), den.clone());
                RealParam::Rational(&lo + (&hi - &lo) * step)
            })
            .collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExceptionalRow {
    pub u: f64,
    /// Smallest product found for `q <= Q_max`; `None` when no admissible
    /// pair was met.
    pub min_product: Option<f64>,
    pub argmin: Option<(u64, i128)>,
    /// `min_product` is the true minimum over the horizon.
    pub exact_min: bool,
    pub survives: bool,
}

/// Finite-horizon surrogate of the exceptional set: `u` survives when no
/// `q <= Q_max` brings the joint product to `delta` or below. Survivors
/// form a superset of the true set on the grid.
#[derive(Clone, Debug, Serialize)]
pub struct ExceptionalScan {
    pub survivors: PointSet1D,
    pub rows: Vec<ExceptionalRow>,
}

impl ExceptionalScan {
    pub fn survivor_count(&self) -> usize {
        self.rows.iter().filter(|r| r.survives).count()
    }

    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["u", "min_product", "survives"])?;
        for r in &self.rows {
            let m = r.min_product.map_or_else(|| "inf".to_string(), |x| format!("{x:e}"));
            out.write_record([format!("{:e}", r.u), m, r.survives.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

struct Best(Option<(f64, u64, i128)>);

impl Best {
    fn offer(&mut self, value: f64, q: u64, q0: i128) {
        if self.0.is_none_or(|(b, _, _)| value < b) {
            self.0 = Some((value, q, q0));
        }
    }
}

/// Convergents `a/q` of the rational `x` with `q <= q_max`.
fn convergents_upto(x: &BigRational, q_max: u64) -> Vec<(BigInt, u64)> {
    let mut n = x.numer().clone();
    let mut d = x.denom().clone();
    let conv = Convergents::new(std::iter::from_fn(move || {
        if d.is_zero() {
            return None;
        }
        let (a, rem) = n.div_mod_floor(&d);
        n = std::mem::replace(&mut d, rem);
        Some(a)
    }));
    let mut out = Vec::new();
    for (a, q) in conv {
        match q.to_u64() {
            Some(q) if q <= q_max => out.push((a, q)),
            _ => break,
        }
    }
    out
}

fn exact_u(u: &RealParam) -> Result<BigRational> {
    match u {
        RealParam::Rational(r) => Ok(r.clone()),
        RealParam::Float(x) => BigRational::from_f64(*x).ok_or_else(|| Error::InvalidInput("u not finite".into())),
        RealParam::Quadratic(_) => Err(Error::InvalidInput("grid points are rational".into())),
    }
}

/// Minimum of the joint product over `q <= q_max` restricted to the
/// convergent candidates: at level `j` write `q0 = q V_j + p^j a` with
/// `V_j = v mod p^j`; then the product is at most `q |q a_j - a|` for
/// `a_j = (u - V_j) / p^j`, and any pair with product below `1/2` has
/// `a/q` a convergent of `a_j`. Exact whenever the minimum is below `1/2`.
fn min_by_convergents(u: &RealParam, ve: &PAdicEval, v: &PAdicApprox, window: &Q0Window, q_max: u64) -> Result<Best> {
    let ue = RealEval::new(u.clone());
    let ur = exact_u(u)?;
    let p = v.prime();
    let pb = BigInt::from(p.get());
    let f_max = ue.floor_mul(q_max as i128)?;
    let hi_max = window.q0_max.map_or(2 * f_max.unsigned_abs() + 4, |h| h as u128);
    // a pair's level is the valuation of q v - q0; for integer v it stays
    // below log_p(q_max |v| + hi), otherwise only the stored digits bound it
    let (depth, span) = match v.to_integer() {
        Some(n) => (i64::MAX, Some(BigInt::from(q_max) * n.abs() + BigInt::from(hi_max))),
        None => (v.absolute_precision().unwrap_or(0), None),
    };
    let mut best = Best(None);
    let mut pj = BigInt::from(1);
    let mut j = 0i64;
    loop {
        let vj = if j == 0 { BigInt::zero() } else { v.residue_mod(j as u32)? };
        let alpha = (&ur - BigRational::from_integer(vj.clone())) / BigRational::from_integer(pj.clone());
        for (a, q) in convergents_upto(&alpha, q_max) {
            let q0 = BigInt::from(q) * &vj + &pj * &a;
            let Some(q0) = q0.to_i128() else { continue };
            let mut cand = vec![(q, q0)];
            if q0 != 0 && q0.unsigned_abs() < window.q0_min as u128 {
                let k = (window.q0_min as u128).div_ceil(q0.unsigned_abs()) as u64;
                if let Some(kq) = q.checked_mul(k).filter(|&kq| kq <= q_max) {
                    cand.push((kq, q0 * k as i128));
                }
            }
            for (q, q0) in cand {
                let f = ue.floor_mul(q as i128)?;
                if !window.admits(f, q0) {
                    continue;
                }
                let val = gmt_product(&ue, ve, q as i128, q0, PrecisionMode::Binary64)?;
                best.offer(val.value, q, q0);
            }
        }
        if span.as_ref().is_some_and(|s| pj > s * 2) || j >= depth {
            break;
        }
        pj *= &pb;
        j += 1;
    }
    Ok(best)
}

/// Minimum over `q <= q_max` by the candidate ladder at every `q`,
/// stopping early once a value `<= stop_at` appears.
fn min_by_ladder(u: &RealParam, ve: &PAdicEval, window: &Q0Window, q_max: u64, stop_at: f64) -> Result<(Best, bool)> {
    let ue = RealEval::new(u.clone());
    let mut best = Best(None);
    for q in 1..=q_max {
        if let Some((q0, val)) = gmt_best_for_q(&ue, ve, window, q as i128, PrecisionMode::Binary64)? {
            best.offer(val.value, q, q0);
            if val.value <= stop_at {
                return Ok((best, false));
            }
        }
    }
    Ok((best, true))
}

fn scan_one(u: &RealParam, ve: &PAdicEval, v: &PAdicApprox, delta: f64, q_max: u64, window: &Q0Window) -> Result<ExceptionalRow> {
    let (best, exact_min) = if delta < 0.5 {
        let b = min_by_convergents(u, ve, v, window, q_max)?;
        let exact = b.0.is_some_and(|(m, _, _)| m < 0.5);
        (b, exact)
    } else {
        min_by_ladder(u, ve, window, q_max, delta)?
    };
    let min_product = best.0.map(|b| b.0);
    Ok(ExceptionalRow {
        u: u.to_f64(),
        survives: min_product.is_none_or(|m| m > delta),
        argmin: best.0.map(|(_, q, q0)| (q, q0)),
        min_product,
        exact_min,
    })
}

pub fn exceptional_scan(v: &PAdicApprox, delta: f64, q_max: u64, grid: &UGrid, window: Q0Window) -> Result<ExceptionalScan> {
    if !(delta > 0.0) {
        return Err(Error::InvalidInput(format!("delta {delta} must be positive")));
    }
    if q_max == 0 {
        return Err(Error::InvalidInput("Q_max must be at least 1".into()));
    }
    if v.valuation().is_some_and(|k| k < 0) {
        return Err(Error::InvalidInput("v must lie in Z_p".into()));
    }
    let ve = PAdicEval::new(v.clone());
    let params = grid.params()?;
    let rows: Vec<ExceptionalRow> =
        params.par_iter().map(|u| scan_one(u, &ve, v, delta, q_max, &window)).collect::<Result<_>>()?;
    let survivors = PointSet1D::new(
        rows.iter().filter(|r| r.survives).map(|r| r.u),
        format!("finite-horizon survivors, delta {delta}, Q {q_max} (superset surrogate)"),
    );
    Ok(ExceptionalScan { survivors, rows })
}

/// The same scan evaluated by the ladder at every `q`, for cross-checks.
pub fn exceptional_scan_ladder(v: &PAdicApprox, delta: f64, q_max: u64, grid: &UGrid, window: Q0Window) -> Result<ExceptionalScan> {
    let ve = PAdicEval::new(v.clone());
    let rows: Vec<ExceptionalRow> = grid
        .params()?
        .par_iter()
        .map(|u| {
            let (best, exact_min) = min_by_ladder(u, &ve, &window, q_max, f64::NEG_INFINITY)?;
            let min_product = best.0.map(|b| b.0);
            Ok(ExceptionalRow {
                u: u.to_f64(),
                survives: min_product.is_none_or(|m| m > delta),
                argmin: best.0.map(|(_, q, q0)| (q, q0)),
                min_product,
                exact_min,
            })
        })
        .collect::<Result<_>>()?;
    let survivors = PointSet1D::new(rows.iter().filter(|r| r.survives).map(|r| r.u), "ladder survivors");
    Ok(ExceptionalScan { survivors, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::Prime;
    use num_traits::One;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn agree(v: &PAdicApprox, delta: f64, q_max: u64, grid: &UGrid) -> usize {
        let a = exceptional_scan(v, delta, q_max, grid, Q0Window::default()).unwrap();
        let b = exceptional_scan_ladder(v, delta, q_max, grid, Q0Window::default()).unwrap();
        for (x, y) in a.rows.iter().zip(&b.rows) {
            assert_eq!(x.survives, y.survives, "u = {}", x.u);
            if x.exact_min {
                assert_eq!(x.min_product, y.min_product, "u = {}", x.u);
            }
        }
        a.survivor_count()
    }

    #[test]
    fn convergents_match_ladder() {
        // endpoints without small denominators, so grid points are not near
        // rationals that die at q = 59
        let g = UGrid::new(0.1234567, 0.9876543, 60);
        assert!(agree(&PAdicApprox::zero(p(2)), 1e-4, 1200, &g) > 5);
        agree(&PAdicApprox::from_integer(5, p(3)), 0.02, 800, &g);
        let v = PAdicApprox::from_digits(p(5), 0, &[3, 1, 4, 1, 0, 2, 3, 4]).unwrap();
        agree(&v, 0.03, 800, &UGrid::new(-1.0, 1.0, 40));
        agree(&PAdicApprox::from_integer(1, p(2)), 4e-3, 800, &UGrid::new(-2.0, 2.0, 40));
    }

    #[test]
    fn vacuous_thresholds() {
        let v = PAdicApprox::zero(p(2));
        let g = UGrid::new(0.0, 1.0, 101);
        // at q = 1 every product is at least 1/2 on [0, 1]
        let all = exceptional_scan(&v, 0.4, 1, &g, Q0Window::default()).unwrap();
        assert_eq!(all.survivor_count(), 101);
        let none = exceptional_scan(&v, 1.0, 1, &g, Q0Window::default()).unwrap();
        assert_eq!(none.survivor_count(), 0);
    }

    #[test]
    fn rationals_die_past_their_denominator() {
        let v = PAdicApprox::zero(p(2));
        let g = UGrid { lo: 0.0, hi: 1.0, n: 50, exact: true };
        let s = exceptional_scan(&v, 1e-6, 98, &g, Q0Window::default()).unwrap();
        // u = 0 has no admissible q0 with q0 - q u = 0
        assert_eq!(s.survivors.points(), &[0.0]);
        for (u, row) in g.params().unwrap().iter().zip(&s.rows).skip(1) {
            let RealParam::Rational(r) = u else { unreachable!() };
            let (q, q0) = row.argmin.unwrap();
            assert_eq!(row.min_product, Some(0.0));
            assert!(BigRational::new(q0.into(), q.into()) == *r);
            assert!(q as u128 <= 2 * r.denom().to_u128().unwrap() || r.numer().is_one());
        }
    }

    #[test]
    fn survivors_shrink_with_horizon_and_delta() {
        let v = PAdicApprox::zero(p(3));
        let g = UGrid::new(0.0, 1.0, 200);
        let w = Q0Window::default();
        let mut prev: Option<Vec<f64>> = None;
        for q in [10u64, 100, 1000, 5000] {
            let s = exceptional_scan(&v, 1e-2, q, &g, w).unwrap();
            let cur = s.survivors.points().to_vec();
            if let Some(pr) = &prev {
                assert!(cur.iter().all(|x| pr.contains(x)));
            }
            prev = Some(cur);
        }
        let big = exceptional_scan(&v, 1e-2, 1000, &g, w).unwrap();
        let small = exceptional_scan(&v, 1e-3, 1000, &g, w).unwrap();
        assert!(big.survivors.points().iter().all(|x| small.survivors.points().contains(x)));
    }

    #[test]
    fn rejects_bad_input() {
        let v = PAdicApprox::zero(p(2));
        let g = UGrid::new(0.0, 1.0, 10);
        assert!(exceptional_scan(&v, 0.0, 10, &g, Q0Window::default()).is_err());
        assert!(exceptional_scan(&v, 0.1, 0, &g, Q0Window::default()).is_err());
        assert!(exceptional_scan(&v, 0.1, 10, &UGrid::new(1.0, 0.0, 10), Q0Window::default()).is_err());
    }
}
