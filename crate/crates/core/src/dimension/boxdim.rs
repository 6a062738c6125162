use serde::Serialize;

use super::{separated_count, PointSet1D};
use crate::error::{Error, Result};

/// Least-squares fit of `log s_delta` against `|log delta|`.
///
/// The slope estimates the dimension at the resolutions sampled, not the
/// limit.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoxDimFit {
    pub slope: f64,
    pub intercept: f64,
    pub counts: Vec<(f64, usize)>,
    pub residuals: Vec<f64>,
    pub r_squared: f64,
}

/// `2^-4, 2^-5, ..., 2^-12`.
pub fn default_ladder() -> Vec<f64> {
    (4..=12).map(|k| 2f64.powi(-k)).collect()
}

/// Geometric ladder `start * ratio^i`, `rungs` terms.
pub fn geometric_ladder(start: f64, ratio: f64, rungs: usize) -> Vec<f64> {
    (0..rungs).map(|i| start * ratio.powi(i as i32)).collect()
}

pub fn box_dim_estimate(s: &PointSet1D, ladder: &[f64]) -> Result<BoxDimFit> {
    if ladder.len() < 4 {
        return Err(Error::InvalidInput(format!("ladder needs at least 4 rungs, got {}", ladder.len())));
    }
    if ladder.iter().any(|&d| !(d > 0.0 && d.is_finite())) || ladder.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidInput("ladder must be positive and strictly decreasing".into()));
    }
    if s.is_empty() {
        return Err(Error::InvalidInput("empty point set has no box dimension".into()));
    }
    let counts: Vec<(f64, usize)> = ladder.iter().map(|&d| (d, separated_count(s, d))).collect();
    let xs: Vec<f64> = ladder.iter().map(|d| -d.ln()).collect();
    let ys: Vec<f64> = counts.iter().map(|&(_, c)| (c as f64).ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals: Vec<f64> = xs.iter().zip(&ys).map(|(x, y)| y - (intercept + slope * x)).collect();
    let ss_res: f64 = residuals.iter().map(|r| r * r).sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Ok(BoxDimFit { slope, intercept, counts, residuals, r_squared })
}

impl BoxDimFit {
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["delta", "count"])?;
        for (d, c) in &self.counts {
            out.write_record([format!("{d:e}"), c.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singleton_is_zero() {
        let fit = box_dim_estimate(&PointSet1D::new([0.3], "pt"), &default_ladder()).unwrap();
        assert_eq!(fit.slope, 0.0);
        assert!(fit.counts.iter().all(|&(_, c)| c == 1));
    }

    #[test]
    fn interval_grid_is_one() {
        let n = (1 << 14) + 1;
        let fit = box_dim_estimate(&PointSet1D::grid(0.0, 1.0, n), &default_ladder()).unwrap();
        assert!((fit.slope - 1.0).abs() < 0.1, "slope {}", fit.slope);
    }

    #[test]
    fn cantor_is_log2_over_log3() {
        let fit = box_dim_estimate(&PointSet1D::cantor(9), &default_ladder()).unwrap();
        let target = 2f64.ln() / 3f64.ln();
        assert!((fit.slope - target).abs() < 0.08, "slope {}", fit.slope);
    }

    #[test]
    fn union_is_bounded_by_max() {
        let ladder = default_ladder();
        let a = PointSet1D::cantor(9);
        let b = PointSet1D::new((0..50).map(|i| 2.0 + i as f64 * 1e-3), "short grid");
        let fa = box_dim_estimate(&a, &ladder).unwrap().slope;
        let fb = box_dim_estimate(&b, &ladder).unwrap().slope;
        let fu = box_dim_estimate(&a.union(&b), &ladder).unwrap().slope;
        // log s(A u B) - log max(s(A), s(B)) lies in [0, log 2] at every rung;
        // a perturbation bounded that way moves the slope by at most
        // log 2 * sum |x - mean| / sum (x - mean)^2
        let xs: Vec<f64> = ladder.iter().map(|d| -d.ln()).collect();
        let mx = xs.iter().sum::<f64>() / xs.len() as f64;
        let slack = 2f64.ln() * xs.iter().map(|x| (x - mx).abs()).sum::<f64>()
            / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
        assert!(fu <= fa.max(fb) + slack, "union {fu} vs {fa} {fb}");
    }

    #[test]
    fn rejects_bad_ladders() {
        let s = PointSet1D::new([0.0, 1.0], "two");
        assert!(box_dim_estimate(&s, &[0.1, 0.05, 0.02]).is_err());
        assert!(box_dim_estimate(&s, &[0.1, 0.2, 0.05, 0.01]).is_err());
        assert!(box_dim_estimate(&s, &[0.1, 0.05, 0.0, -1.0]).is_err());
        assert!(box_dim_estimate(&PointSet1D::new([], "e"), &default_ladder()).is_err());
    }
}
