use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::{shortest_vector_norm, Cone, ConeGrid, ConePoint, LatticePoint, SearchCap};
use crate::error::Result;
use crate::padic::ZInvP;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProfileCell {
    pub t: f64,
    pub n: i64,
    /// `NaN` when the cell failed; see `error`.
    pub height: f64,
    pub norm: f64,
    pub certified: bool,
    pub witness_q: Option<String>,
    pub witness_q0: Option<String>,
    #[serde(skip)]
    pub witness: Option<(ZInvP, ZInvP)>,
    pub error: Option<String>,
}

impl ProfileCell {
    pub fn point(&self) -> ConePoint {
        ConePoint::new(self.t, self.n)
    }

    pub fn ok(&self) -> bool {
        self.error.is_none()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitProfile {
    pub cone: String,
    pub grid: ConeGrid,
    pub cells: Vec<ProfileCell>,
}

fn cell(x: &LatticePoint, s: ConePoint, cap: SearchCap) -> ProfileCell {
    let blank = |e: String| ProfileCell {
        t: s.t,
        n: s.n,
        height: f64::NAN,
        norm: f64::NAN,
        certified: false,
        witness_q: None,
        witness_q0: None,
        witness: None,
        error: Some(e),
    };
    let y = match x.apply_alpha(s) {
        Ok(y) => y,
        Err(e) => return blank(e.to_string()),
    };
    match shortest_vector_norm(&y, cap) {
        Ok(sv) => ProfileCell {
            t: s.t,
            n: s.n,
            height: -sv.norm.ln(),
            norm: sv.norm,
            certified: sv.certified,
            witness_q: Some(sv.witness.q.to_string()),
            witness_q0: Some(sv.witness.q0.to_string()),
            witness: Some((sv.witness.q, sv.witness.q0)),
            error: None,
        },
        Err(e) => blank(e.to_string()),
    }
}

/// Heights `-log lambda_1(alpha^s x)` over the grid points of `cone`.
/// Cells run in parallel; failures are kept as flagged cells.
pub fn cone_orbit_profile(x: &LatticePoint, cone: &Cone, grid: ConeGrid, cap: SearchCap) -> Result<OrbitProfile> {
    let points = grid.points(cone, x.prime())?;
    let cells = points.par_iter().map(|&s| cell(x, s, cap)).collect();
    Ok(OrbitProfile { cone: cone.to_string(), grid, cells })
}

impl OrbitProfile {
    pub fn max_height(&self) -> Option<f64> {
        self.argmax().map(|c| c.height)
    }

    pub fn argmax(&self) -> Option<&ProfileCell> {
        self.cells.iter().filter(|c| c.ok()).max_by(|a, b| a.height.total_cmp(&b.height))
    }

    /// `(T, sup height over cells with t <= T)` at each distinct grid time.
    pub fn escape_curve(&self) -> Vec<(f64, f64)> {
        let mut cells: Vec<&ProfileCell> = self.cells.iter().filter(|c| c.ok()).collect();
        cells.sort_by(|a, b| a.t.total_cmp(&b.t));
        let mut out: Vec<(f64, f64)> = Vec::new();
        let mut sup = f64::NEG_INFINITY;
        for c in cells {
            sup = sup.max(c.height);
            match out.last_mut() {
                Some(last) if last.0 == c.t => last.1 = sup,
                _ => out.push((c.t, sup)),
            }
        }
        out
    }

    pub fn all_certified(&self) -> bool {
        self.cells.iter().all(|c| c.ok() && c.certified)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["t", "n", "height", "certified", "witness_q", "witness_q0"])?;
        for c in &self.cells {
            out.write_record([
                c.t.to_string(),
                c.n.to_string(),
                format!("{:.9}", c.height),
                c.certified.to_string(),
                c.witness_q.clone().unwrap_or_default(),
                c.witness_q0.clone().unwrap_or_default(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "cone": self.cone,
            "grid": self.grid,
            "max_height": self.max_height(),
            "argmax": self.argmax().map(|c| [c.t, c.n as f64]),
            "escape_curve": self.escape_curve(),
            "cells": self.cells,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diophantine::RealParam;
    use crate::padic::{PAdicApprox, Prime};
    use num_rational::BigRational;

    fn sqrt2_point() -> LatticePoint {
        let u = RealParam::Quadratic(crate::contfrac::QuadIrr::sqrt(2).unwrap());
        LatticePoint::x_uv(u, PAdicApprox::zero(Prime::new(2).unwrap()))
    }

    #[test]
    fn profile_shape_and_outputs() {
        let prof = cone_orbit_profile(&sqrt2_point(), &Cone::c(), ConeGrid::new(5.0, 3), SearchCap::default()).unwrap();
        assert!(prof.all_certified());
        assert!(prof.cells.iter().all(|c| c.height >= 0.0 && c.t >= c.n as f64 * 2f64.ln() - 1e-12));
        let curve = prof.escape_curve();
        assert!(curve.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 <= w[1].1));
        assert_eq!(curve.last().unwrap().1, prof.max_height().unwrap());
        let mut buf = Vec::new();
        prof.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("t,n,height,certified,witness_q,witness_q0\n"));
        assert_eq!(text.lines().count(), prof.cells.len() + 1);
        assert!(prof.to_json()["cells"].as_array().unwrap().len() == prof.cells.len());
    }

    #[test]
    fn budgets_agree_where_both_certify() {
        let x = sqrt2_point();
        let mut grid = ConeGrid::new(12.5, 10);
        grid.t_step = 0.25;
        let a = cone_orbit_profile(&x, &Cone::c(), grid, SearchCap { max_steps: 10_000 }).unwrap();
        let b = cone_orbit_profile(&x, &Cone::c(), grid, SearchCap { max_steps: 5 }).unwrap();
        let mut both = 0;
        for (ca, cb) in a.cells.iter().zip(&b.cells) {
            assert_eq!((ca.t, ca.n), (cb.t, cb.n));
            if ca.certified && cb.certified {
                assert_eq!(ca.height, cb.height);
                both += 1;
            } else {
                // an uncertified value is an upper bound on the norm
                assert!(cb.norm >= ca.norm - 1e-15 || !ca.certified);
            }
        }
        assert!(both > 0);
    }

    #[test]
    fn rational_orbit_escapes() {
        let u = RealParam::Rational(BigRational::new(5.into(), 3.into()));
        let x = LatticePoint::x_uv(u, PAdicApprox::zero(Prime::new(3).unwrap()));
        let prof = cone_orbit_profile(&x, &Cone::c(), ConeGrid::new(30.0, 0), SearchCap::default()).unwrap();
        let curve = prof.escape_curve();
        let at = |t: f64| curve.iter().find(|c| c.0 == t).unwrap().1;
        assert!(at(30.0) > at(10.0) + 9.0);
    }

    #[test]
    fn failed_cells_are_flagged() {
        let u = RealParam::Quadratic(crate::contfrac::QuadIrr::sqrt(2).unwrap());
        let v = PAdicApprox::from_digits(Prime::new(2).unwrap(), 0, &[1, 1, 0, 1]).unwrap();
        let x = LatticePoint::x_uv(u, v);
        let prof = cone_orbit_profile(&x, &Cone::c(), ConeGrid::new(6.0, 4), SearchCap::default()).unwrap();
        assert!(prof.cells.iter().any(|c| !c.ok() && c.n > 2));
        assert!(prof.cells.iter().filter(|c| c.n <= 2).all(|c| c.ok()));
        assert!(!prof.all_certified());
    }
}
