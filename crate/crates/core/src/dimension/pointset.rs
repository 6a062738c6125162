use serde::{Deserialize, Serialize};

/// Points closer than this are merged.
pub const RESOLUTION: f64 = 1.0 / (1u64 << 52) as f64;

/// Sorted, deduplicated sample of the line with a label saying where it
/// came from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSet1D {
    points: Vec<f64>,
    label: String,
}

impl PointSet1D {
    /// Non-finite values are dropped.
    pub fn new(points: impl IntoIterator<Item = f64>, label: impl Into<String>) -> Self {
        let mut pts: Vec<f64> = points.into_iter().filter(|x| x.is_finite()).collect();
        pts.sort_by(f64::total_cmp);
        let mut out: Vec<f64> = Vec::with_capacity(pts.len());
        for x in pts {
            if out.last().is_none_or(|&l| x - l > RESOLUTION) {
                out.push(x);
            }
        }
        PointSet1D { points: out, label: label.into() }
    }

    /// `n` equally spaced points on `[lo, hi]`, endpoints included.
    pub fn grid(lo: f64, hi: f64, n: usize) -> Self {
        let pts = (0..n).map(|i| if n == 1 { lo } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 });
        PointSet1D::new(pts, format!("grid {n} on [{lo}, {hi}]"))
    }

    /// Left endpoints of the `2^depth` intervals of the middle-thirds
    /// construction at the given depth, plus the point 1.
    pub fn cantor(depth: u32) -> Self {
        let mut pts = vec![0u64];
        let mut scale = 1u64;
        for _ in 0..depth {
            pts = pts.iter().flat_map(|&a| [3 * a, 3 * a + 2]).collect();
            scale *= 3;
        }
        let s = scale as f64;
        let it = pts.into_iter().map(|a| a as f64 / s).chain([1.0]);
        PointSet1D::new(it, format!("middle-thirds depth {depth}"))
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn union(&self, other: &PointSet1D) -> PointSet1D {
        let label = format!("{} | {}", self.label, other.label);
        PointSet1D::new(self.points.iter().chain(&other.points).copied(), label)
    }
}

/// Exact test of `b - a > delta` for binary64 inputs.
fn gap_exceeds(a: f64, b: f64, delta: f64) -> bool {
    // two-sum: s + err == b - a exactly
    let s = b - a;
    let bb = s + a;
    let err = (b - bb) + (-a - (s - bb));
    s > delta || (s == delta && err > 0.0)
}

/// Largest subset with pairwise distances `> delta`, distances taken
/// exactly. Taking points left to right whenever they clear the last
/// chosen one is optimal on the line.
pub fn separated_count(s: &PointSet1D, delta: f64) -> usize {
    let mut last: Option<f64> = None;
    let mut n = 0;
    for &x in &s.points {
        if last.is_none_or(|l| gap_exceeds(l, x, delta)) {
            last = Some(x);
            n += 1;
        }
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::FromPrimitive;
    use proptest::prelude::*;

    // the points i/1000 themselves give 91; rounding moves some gaps of ten steps above 0.01
    const FROZEN_THOUSANDTHS: usize = 99;

    #[test]
    fn small_examples() {
        assert_eq!(separated_count(&PointSet1D::new([0.0, 0.5, 1.0], "a"), 0.4), 3);
        assert_eq!(separated_count(&PointSet1D::new([0.0, 0.1, 0.2], "b"), 0.15), 2);
        assert_eq!(separated_count(&PointSet1D::new([], "empty"), 0.1), 0);
    }

    #[test]
    fn dedup_and_sort() {
        let s = PointSet1D::new([0.3, 0.1, 0.1 + 1e-17, f64::NAN, 0.2], "x");
        assert_eq!(s.points(), &[0.1, 0.2, 0.3]);
    }

    #[test]
    fn thousandths_grid() {
        let s = PointSet1D::grid(0.0, 1.0, 1001);
        // greedy over the exact rational values of the stored points
        let d = BigRational::from_f64(0.01).unwrap();
        let mut last: Option<BigRational> = None;
        let mut exact = 0;
        for &x in s.points() {
            let x = BigRational::from_f64(x).unwrap();
            if last.as_ref().is_none_or(|l| &x - l > d) {
                last = Some(x);
                exact += 1;
            }
        }
        assert_eq!(separated_count(&s, 0.01), exact);
        assert_eq!(exact, FROZEN_THOUSANDTHS);
    }

    #[test]
    fn cantor_sample() {
        let c = PointSet1D::cantor(3);
        assert_eq!(c.len(), 9);
        assert_eq!(c.points()[1], 2.0 / 27.0);
    }

    fn brute(points: &[f64], delta: f64) -> usize {
        let n = points.len();
        let mut best = 0;
        for mask in 0u32..(1 << n) {
            let chosen: Vec<f64> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| points[i]).collect();
            let ok = chosen.iter().enumerate().all(|(i, a)| chosen[i + 1..].iter().all(|b| (a - b).abs() > delta));
            if ok {
                best = best.max(chosen.len());
            }
        }
        best
    }

    proptest! {
        #[test]
        fn greedy_is_optimal(pts in prop::collection::vec(0.0f64..1.0, 0..=14), delta in 0.01f64..0.3) {
            let s = PointSet1D::new(pts, "random");
            prop_assert_eq!(separated_count(&s, delta), brute(s.points(), delta));
        }

        #[test]
        fn exact_gap_test(a in -10.0f64..10.0, b in -10.0f64..10.0, d in 0.0f64..5.0) {
            let ex = BigRational::from_f64(b).unwrap() - BigRational::from_f64(a).unwrap();
            prop_assert_eq!(gap_exceeds(a, b, d), ex > BigRational::from_f64(d).unwrap());
        }

        #[test]
        fn monotone_in_delta(pts in prop::collection::vec(-5.0f64..5.0, 0..200), a in 0.001f64..1.0, b in 0.001f64..1.0) {
            let s = PointSet1D::new(pts, "random");
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(separated_count(&s, lo) >= separated_count(&s, hi));
        }
    }
}
