use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{cone_orbit_profile, Cone, ConeGrid, ConePoint, LatticePoint, SearchCap};
use crate::diophantine::{RealEval, RealParam};
use crate::error::{Error, Result};
use crate::padic::{valuation, PAdicApprox, Prime};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorrespondenceCap {
    pub grid: ConeGrid,
    pub search: SearchCap,
}

impl CorrespondenceCap {
    pub fn new(t_max: f64, n_max: i64) -> Self {
        CorrespondenceCap { grid: ConeGrid::new(t_max, n_max), search: SearchCap::default() }
    }
}

/// An integer pair extracted from a short orbit vector.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrespondenceWitness {
    pub point: ConePoint,
    pub norm: f64,
    pub q: BigInt,
    pub q0: BigInt,
    /// The Diophantine product of the pair; an upper bound if the p-adic
    /// factor vanished at working precision.
    pub product: f64,
    pub bound: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Correspondence {
    Witness(CorrespondenceWitness),
    /// No grid point had norm below `delta`; `min_norm` is the smallest seen.
    Inconclusive { min_norm: f64 },
}

impl Correspondence {
    pub fn witness(&self) -> Option<&CorrespondenceWitness> {
        match self {
            Correspondence::Witness(w) => Some(w),
            Correspondence::Inconclusive { .. } => None,
        }
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidInput(format!("delta {delta} outside (0, 1]")));
    }
    Ok(())
}

fn padic_abs(x: &BigInt, p: Prime) -> f64 {
    if x.is_zero() {
        0.0
    } else {
        (p.get() as f64).powi(-(valuation(x, p).unwrap() as i32))
    }
}

/// Scans the grid in order of `(t, n)` and returns the first cell below
/// `delta` with its integer pair, computed by `extract`.
fn first_short<F>(x: &LatticePoint, cone: &Cone, delta: f64, cap: CorrespondenceCap, extract: F) -> Result<Correspondence>
where
    F: Fn(ConePoint, f64, &crate::padic::ZInvP, &crate::padic::ZInvP) -> Result<CorrespondenceWitness>,
{
    let mut prof = cone_orbit_profile(x, cone, cap.grid, cap.search)?;
    prof.cells.sort_by(|a, b| a.t.total_cmp(&b.t).then(a.n.cmp(&b.n)));
    let mut min_norm = f64::INFINITY;
    for c in &prof.cells {
        if !c.ok() {
            continue;
        }
        min_norm = min_norm.min(c.norm);
        if c.norm < delta {
            let (q, q0) = c.witness.as_ref().expect("ok cells carry a witness");
            return extract(c.point(), c.norm, q, q0).map(Correspondence::Witness);
        }
    }
    Ok(Correspondence::Inconclusive { min_norm })
}

fn integral(z: &crate::padic::ZInvP, what: &str) -> Result<BigInt> {
    z.to_integer().ok_or_else(|| Error::InvalidInput(format!("{what} = {z} is not an integer")))
}

/// Along the cone `C`: a vector of norm `< delta` at `(t, n)` gives the
/// integers `q = p^n Q`, `q0 = p^n Q0` with
/// `|q| |qu - q0| |qv - q0|_p < delta^3`.
pub fn correspondence_check_g(u: &RealParam, v: &PAdicApprox, delta: f64, cap: CorrespondenceCap) -> Result<Correspondence> {
    check_delta(delta)?;
    if u.is_zero() {
        return Err(Error::InvalidInput("u must be nonzero".into()));
    }
    if v.valuation().is_some_and(|k| k < 0) {
        return Err(Error::InvalidInput("v must lie in Z_p".into()));
    }
    let p = v.prime();
    let x = LatticePoint::x_uv(u.clone(), v.clone());
    let ue = RealEval::new(u.clone());
    first_short(&x, &Cone::c(), delta, cap, |s, norm, qs, q0s| {
        let q = integral(&qs.mul_pow_p(s.n), "q")?;
        let q0 = integral(&q0s.mul_pow_p(s.n), "q0")?;
        let lin = v.linear_norm(&q, &q0);
        let product = q.abs().to_f64().unwrap_or(f64::INFINITY) * ue.offset_big(&q, &q0).abs() * lin.value(p);
        let bound = delta.powi(3);
        Ok(CorrespondenceWitness { point: s, norm, holds: !q.is_zero() && product < bound, q, q0, product, bound })
    })
}

/// Along the cone `C'` with `v = 0`: a vector of norm `< delta` at
/// `(t, n)`, `n <= 0`, gives `q = p^-n Q`, `q0 = p^-n Q0` with
/// `|q| |q|_p |qu - q0| < delta^3`.
pub fn correspondence_check_mt(u: &RealParam, p: Prime, delta: f64, cap: CorrespondenceCap) -> Result<Correspondence> {
    check_delta(delta)?;
    if u.is_zero() {
        return Err(Error::InvalidInput("u must be nonzero".into()));
    }
    let x = LatticePoint::x_uv(u.clone(), PAdicApprox::zero(p));
    let ue = RealEval::new(u.clone());
    first_short(&x, &Cone::c_prime(), delta, cap, |s, norm, qs, q0s| {
        let q = integral(&qs.mul_pow_p(-s.n), "q")?;
        let q0 = integral(&q0s.mul_pow_p(-s.n), "q0")?;
        let product = q.abs().to_f64().unwrap_or(f64::INFINITY) * padic_abs(&q, p) * ue.offset_big(&q, &q0).abs();
        let bound = delta.powi(3);
        Ok(CorrespondenceWitness { point: s, norm, holds: !q.is_zero() && product < bound, q, q0, product, bound })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn two() -> Prime {
        Prime::new(2).unwrap()
    }

    fn rat(a: i64, b: i64) -> RealParam {
        RealParam::Rational(BigRational::new(a.into(), b.into()))
    }

    #[test]
    fn rational_u_has_witnesses_at_every_delta() {
        for delta in [0.9, 0.3, 0.05, 0.01] {
            let cap = CorrespondenceCap::new(40.0, 30);
            let g = correspondence_check_g(&rat(3, 7), &PAdicApprox::zero(two()), delta, cap).unwrap();
            let w = g.witness().unwrap_or_else(|| panic!("g, delta {delta}"));
            assert!(w.holds && w.norm < delta);
            let m = correspondence_check_mt(&rat(3, 7), two(), delta, cap).unwrap();
            let w = m.witness().unwrap_or_else(|| panic!("mt, delta {delta}"));
            assert!(w.holds && w.norm < delta);
        }
    }

    #[test]
    fn sqrt2_mt_witness_at_half() {
        let u = RealParam::Quadratic(crate::contfrac::QuadIrr::sqrt(2).unwrap());
        let m = correspondence_check_mt(&u, two(), 0.5, CorrespondenceCap::new(25.0, 10)).unwrap();
        let w = m.witness().unwrap();
        assert_eq!((w.point.t, w.point.n), (10.0, -9));
        assert_eq!((w.q.clone(), w.q0.clone()), (BigInt::from(-5242880), BigInt::from(-7414552)));
        assert!(w.holds);
    }

    #[test]
    fn bad_inputs() {
        let cap = CorrespondenceCap::new(1.0, 1);
        let v = PAdicApprox::zero(two());
        assert!(correspondence_check_g(&rat(1, 2), &v, 0.0, cap).is_err());
        assert!(correspondence_check_g(&rat(1, 2), &v, 1.5, cap).is_err());
        assert!(correspondence_check_g(&rat(0, 1), &v, 0.5, cap).is_err());
        assert!(correspondence_check_g(&rat(1, 2), &PAdicApprox::from_zinvp(&crate::padic::ZInvP::new(1, 1, two())), 0.5, cap).is_err());
    }
}
