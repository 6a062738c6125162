use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::Prime;

/// A point `(t, n)` of `R x Z`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConePoint {
    pub t: f64,
    pub n: i64,
}

impl ConePoint {
    pub fn new(t: f64, n: i64) -> Self {
        ConePoint { t, n }
    }

    pub fn origin() -> Self {
        ConePoint { t: 0.0, n: 0 }
    }
}

impl std::ops::Add for ConePoint {
    type Output = ConePoint;
    fn add(self, o: ConePoint) -> ConePoint {
        ConePoint { t: self.t + o.t, n: self.n + o.n }
    }
}

impl std::ops::Neg for ConePoint {
    type Output = ConePoint;
    fn neg(self) -> ConePoint {
        ConePoint { t: -self.t, n: -self.n }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConeName {
    C,
    CPrime,
    Custom,
}

/// Intersection of half-planes `w . (t, n log p) >= 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cone {
    pub name: ConeName,
    pub normals: Vec<[f64; 2]>,
}

const SLACK: f64 = 1e-12;

impl Cone {
    /// `n >= 0`, `t - n log p >= 0`.
    pub fn c() -> Self {
        Cone { name: ConeName::C, normals: vec![[0.0, 1.0], [1.0, -1.0]] }
    }

    /// `n <= 0`, `t + n log p >= 0`.
    pub fn c_prime() -> Self {
        Cone { name: ConeName::CPrime, normals: vec![[0.0, -1.0], [1.0, 1.0]] }
    }

    pub fn custom(normals: Vec<[f64; 2]>) -> Result<Self> {
        let c = Cone { name: ConeName::Custom, normals };
        if !c.has_interior() {
            return Err(Error::InvalidInput("cone has empty interior".into()));
        }
        Ok(c)
    }

    /// Some direction lies strictly inside every half-plane. Such a cone's
    /// integer points generate `R x Z` as a group.
    pub fn has_interior(&self) -> bool {
        if self.normals.is_empty() {
            return true;
        }
        (0..7200).any(|i| {
            let a = i as f64 * std::f64::consts::PI / 3600.0;
            let d = [a.cos(), a.sin()];
            self.normals.iter().all(|w| w[0] * d[0] + w[1] * d[1] > 1e-9)
        })
    }

    pub fn contains(&self, s: ConePoint, p: Prime) -> bool {
        let y = s.n as f64 * (p.get() as f64).ln();
        self.normals.iter().all(|w| w[0] * s.t + w[1] * y >= -SLACK * (1.0 + s.t.abs()))
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.name {
            ConeName::C => f.write_str("C"),
            ConeName::CPrime => f.write_str("Cprime"),
            ConeName::Custom => write!(f, "custom{:?}", self.normals),
        }
    }
}

/// A rectangular sampling grid `|t| <= t_max`, `|n| <= n_max`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeGrid {
    pub t_step: f64,
    pub n_step: i64,
    pub t_max: f64,
    pub n_max: i64,
}

impl ConeGrid {
    pub fn new(t_max: f64, n_max: i64) -> Self {
        ConeGrid { t_step: 0.25, n_step: 1, t_max, n_max }
    }

    /// Grid points inside the cone, ordered by `n` then `t`.
    pub fn points(&self, cone: &Cone, p: Prime) -> Result<Vec<ConePoint>> {
        if !(self.t_step > 0.0) || self.n_step < 1 {
            return Err(Error::InvalidInput("grid steps must be positive".into()));
        }
        let nt = (self.t_max / self.t_step + 1e-9).floor() as i64;
        let mut out = Vec::new();
        let mut n = -(self.n_max / self.n_step) * self.n_step;
        while n <= self.n_max {
            for i in -nt..=nt {
                let s = ConePoint::new(i as f64 * self.t_step, n);
                if cone.contains(s, p) {
                    out.push(s);
                }
            }
            n += self.n_step;
        }
        Ok(out)
    }
}
