use std::fmt;

use num_bigint::BigInt;

use super::ConePoint;
use crate::diophantine::RealParam;
use crate::error::{Error, Result};
use crate::padic::{PAdicApprox, Prime, ZInvP};

/// Largest exponent magnitude `|t| + |n| log p` kept in binary64.
pub const MAX_EXPONENT: f64 = 700.0;

/// The point `alpha^(t,n) x_{u,v} gamma_m` of `G / Gamma`.
///
/// `x_{u,v}` has the lower unipotent generators with entries `u` and `v`,
/// and `gamma_m = diag(p^m, p^-m)` in `Gamma` relabels the module
/// generators without changing the lattice. If `v` is not in `Z_p` the
/// pair is replaced at construction by `(p^k u, p^k v)` with `p^k v` in
/// `Z_p`, and `k` is kept in `v_shift`.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticePoint {
    u: RealParam,
    v: PAdicApprox,
    v_shift: u32,
    time: ConePoint,
    twist: i64,
}

impl LatticePoint {
    pub fn x_uv(u: RealParam, v: PAdicApprox) -> Self {
        let p = v.prime();
        let k = v.valuation().map_or(0, |val| (-val).max(0) as u32);
        if k == 0 {
            return LatticePoint { u, v, v_shift: 0, time: ConePoint::origin(), twist: 0 };
        }
        let pk = num_traits::pow(BigInt::from(p.get()), k as usize);
        LatticePoint {
            u: u.scaled(&pk),
            v: v.mul_pow_p(k as i64),
            v_shift: k,
            time: ConePoint::origin(),
            twist: 0,
        }
    }

    /// The base point `Z[1/p]^2`.
    pub fn identity(p: Prime) -> Self {
        Self::x_uv(RealParam::Float(0.0), PAdicApprox::zero(p))
    }

    pub fn u(&self) -> &RealParam {
        &self.u
    }
    pub fn v(&self) -> &PAdicApprox {
        &self.v
    }
    pub fn v_shift(&self) -> u32 {
        self.v_shift
    }
    pub fn prime(&self) -> Prime {
        self.v.prime()
    }
    pub fn time(&self) -> ConePoint {
        self.time
    }
    pub fn twist(&self) -> i64 {
        self.twist
    }

    /// Same lattice, generators multiplied on the right by `diag(p^m, p^-m)`.
    pub fn with_twist(&self, m: i64) -> Self {
        LatticePoint { twist: m, ..self.clone() }
    }

    pub fn max_safe_t(&self, n: i64) -> f64 {
        MAX_EXPONENT - n.unsigned_abs() as f64 * (self.prime().get() as f64).ln()
    }

    /// Left multiplication by `alpha^s`.
    pub fn apply_alpha(&self, s: ConePoint) -> Result<Self> {
        let time = self.time + s;
        let max_t = self.max_safe_t(time.n);
        if !time.t.is_finite() || time.t.abs() > max_t {
            return Err(Error::RealOverflow { max_t: max_t.max(0.0) });
        }
        Ok(LatticePoint { time, ..self.clone() })
    }

    /// `[[1, 0], [s, 1]] A` for a point on the `x_{0,v}` orbit at `t = 0`.
    pub fn apply_real_unipotent(&self, s: RealParam) -> Result<Self> {
        if !self.u.is_zero() || self.time.t != 0.0 {
            return Err(Error::InvalidInput("unipotent action is tagged only on x_{0,v} at t = 0".into()));
        }
        let pk = num_traits::pow(BigInt::from(self.prime().get()), self.v_shift as usize);
        Ok(LatticePoint { u: s.scaled(&pk), ..self.clone() })
    }

    /// The real generator matrix `A`, row major.
    pub fn real_matrix(&self) -> [[f64; 2]; 2] {
        let (t, m) = (self.time.t, self.twist as f64);
        let lp = (self.prime().get() as f64).ln();
        let u = self.u.to_f64();
        [
            [(-t + m * lp).exp(), 0.0],
            [(t + m * lp).exp() * u, (t - m * lp).exp()],
        ]
    }

    /// The p-adic generator matrix `B`, row major.
    pub fn padic_matrix(&self) -> [[PAdicApprox; 2]; 2] {
        let p = self.prime();
        let (n, m) = (self.time.n, self.twist);
        let one = PAdicApprox::from_integer(1, p);
        [
            [one.mul_pow_p(n + m), PAdicApprox::zero(p)],
            [self.v.mul_pow_p(m - n), one.mul_pow_p(-n - m)],
        ]
    }

    pub fn real_det(&self) -> f64 {
        let a = self.real_matrix();
        a[0][0] * a[1][1] - a[0][1] * a[1][0]
    }

    pub fn padic_det(&self) -> PAdicApprox {
        let b = self.padic_matrix();
        b[0][0].mul(&b[1][1]).sub(&b[0][1].mul(&b[1][0]))
    }

    /// Standard coordinates of the module element with generator
    /// coordinates `(q, q0)`.
    pub(crate) fn untwist(&self, q: &ZInvP, q0: &ZInvP) -> (ZInvP, ZInvP) {
        (q.mul_pow_p(self.twist), q0.mul_pow_p(-self.twist))
    }

    pub(crate) fn twist_coords(&self, q: &ZInvP, q0: &ZInvP) -> (ZInvP, ZInvP) {
        (q.mul_pow_p(-self.twist), q0.mul_pow_p(self.twist))
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "alpha^({}, {}) x_{{{}, {}}}", self.time.t, self.time.n, self.u, self.v)?;
        if self.twist != 0 {
            write!(f, " gamma_{}", self.twist)?;
        }
        Ok(())
    }
}
