use crate::error::{Error, Result};
use crate::lattice::OrbitProfile;

/// Heights of one orbit at times `t = 0, 1, 2, ...` of the time-one map.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitSegment {
    pub label: String,
    pub heights: Vec<f64>,
}

impl OrbitSegment {
    pub fn new(label: impl Into<String>, heights: Vec<f64>) -> Self {
        OrbitSegment { label: label.into(), heights }
    }

    /// The `n = 0` cells of a profile at integer times `0, 1, ...`, up to
    /// the first missing or failed one.
    pub fn from_profile(profile: &OrbitProfile, label: impl Into<String>) -> Result<Self> {
        let mut heights = Vec::new();
        loop {
            let t = heights.len() as f64;
            match profile.cells.iter().find(|c| c.n == 0 && c.t == t && c.ok()) {
                Some(c) => heights.push(c.height),
                None => break,
            }
        }
        if heights.is_empty() {
            return Err(Error::InvalidInput("profile has no n = 0 cell at t = 0".into()));
        }
        Ok(OrbitSegment { label: label.into(), heights })
    }
}

/// `max_{k < n} |h_i(k) - h_j(k)|` over the common length.
fn distance(a: &OrbitSegment, b: &OrbitSegment, n_steps: usize) -> f64 {
    let len = n_steps.max(1).min(a.heights.len()).min(b.heights.len());
    (0..len).map(|k| (a.heights[k] - b.heights[k]).abs()).fold(0.0, f64::max)
}

/// Largest subfamily whose orbits pairwise separate by more than
/// `epsilon` within the first `n_steps` steps, in the height
/// pseudo-metric. A lower bound for the separated-orbit count of the
/// whole space.
pub fn separation_count_entropy(orbits: &[OrbitSegment], epsilon: f64, n_steps: usize) -> usize {
    let n = orbits.len();
    let words = n.div_ceil(64);
    let mut adj = vec![vec![0u64; words]; n];
    for i in 0..n {
        for j in i + 1..n {
            if distance(&orbits[i], &orbits[j], n_steps) > epsilon {
                adj[i][j / 64] |= 1 << (j % 64);
                adj[j][i / 64] |= 1 << (i % 64);
            }
        }
    }
    let mut all = vec![0u64; words];
    for i in 0..n {
        all[i / 64] |= 1 << (i % 64);
    }
    let mut best = 0;
    max_clique(&adj, 0, all, &mut best);
    best
}

fn count(s: &[u64]) -> usize {
    s.iter().map(|w| w.count_ones() as usize).sum()
}

fn members(s: &[u64]) -> impl Iterator<Item = usize> + '_ {
    s.iter().enumerate().flat_map(|(w, &bits)| (0..64).filter(move |b| bits >> b & 1 == 1).map(move |b| w * 64 + b))
}

/// Branch and bound over candidate sets, pivoting on the vertex with the
/// most candidate neighbours.
fn max_clique(adj: &[Vec<u64>], size: usize, mut cand: Vec<u64>, best: &mut usize) {
    if count(&cand) == 0 {
        *best = (*best).max(size);
        return;
    }
    if size + count(&cand) <= *best {
        return;
    }
    let pivot = members(&cand)
        .max_by_key(|&u| count(&cand.iter().zip(&adj[u]).map(|(a, b)| a & b).collect::<Vec<_>>()))
        .unwrap();
    let branch: Vec<usize> = members(&cand).filter(|&v| adj[pivot][v / 64] >> (v % 64) & 1 == 0).collect();
    for v in branch {
        let next: Vec<u64> = cand.iter().zip(&adj[v]).map(|(a, b)| a & b).collect();
        max_clique(adj, size + 1, next, best);
        cand[v / 64] &= !(1 << (v % 64));
        if size + count(&cand) <= *best {
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seg(h: &[f64]) -> OrbitSegment {
        OrbitSegment::new("s", h.to_vec())
    }

    #[test]
    fn trivial_families() {
        assert_eq!(separation_count_entropy(&[], 0.1, 3), 0);
        assert_eq!(separation_count_entropy(&[seg(&[0.0, 1.0])], 0.1, 3), 1);
        assert_eq!(separation_count_entropy(&[seg(&[0.0]), seg(&[1.0])], 0.5, 1), 2);
        assert_eq!(separation_count_entropy(&[seg(&[0.0, 0.0]), seg(&[0.1, 2.0])], 0.5, 1), 1);
        assert_eq!(separation_count_entropy(&[seg(&[0.0, 0.0]), seg(&[0.1, 2.0])], 0.5, 2), 2);
    }

    fn brute(orbits: &[OrbitSegment], eps: f64, n: usize) -> usize {
        let k = orbits.len();
        (0u32..1 << k)
            .filter(|m| {
                (0..k).all(|i| {
                    (i + 1..k).all(|j| m >> i & 1 == 0 || m >> j & 1 == 0 || distance(&orbits[i], &orbits[j], n) > eps)
                })
            })
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    proptest! {
        #[test]
        fn matches_exhaustive(hs in prop::collection::vec(prop::collection::vec(0.0f64..3.0, 4), 0..12),
                              eps in 0.1f64..1.5, n in 1usize..5) {
            let orbits: Vec<_> = hs.iter().map(|h| seg(h)).collect();
            prop_assert_eq!(separation_count_entropy(&orbits, eps, n), brute(&orbits, eps, n));
        }
    }
}
