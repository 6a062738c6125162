use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::product::{dadic_multiplier, furstenberg_multiplier, mt_multiplier};
use super::{gmt_product, PAdicEval, ProductValue, RealEval, RealParam, Record, RecordSequence};
use crate::error::{Error, Result};
use crate::padic::{DSeq, PAdicApprox, PrecisionMode, Prime};

/// Admissible `q0` for the joint product: `q0_min <= |q0| <= hi(q)`.
///
/// Without `q0_max` the upper end follows the real factor:
/// `hi(q) = 2 |floor(qu)| + 4`, which contains every `q0` within
/// `|qu| + 2` of `qu`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Q0Window {
    pub q0_min: u64,
    pub q0_max: Option<u64>,
    pub allow_negative: bool,
}

impl Default for Q0Window {
    fn default() -> Self {
        Q0Window { q0_min: 2, q0_max: None, allow_negative: true }
    }
}

impl Q0Window {
    /// The box `lo <= q0 <= hi`, positive side only.
    pub fn positive_box(lo: u64, hi: u64) -> Self {
        Q0Window { q0_min: lo, q0_max: Some(hi), allow_negative: false }
    }

    fn hi(&self, floor_qu: i128) -> i128 {
        match self.q0_max {
            Some(h) => h as i128,
            None => 2 * floor_qu.abs() + 4,
        }
    }

    /// Whether `q0` lies in the window for a `q` with `floor(q u) = floor_qu`.
    pub fn admits(&self, floor_qu: i128, q0: i128) -> bool {
        self.intervals(floor_qu).iter().any(|&(lo, hi)| (lo..=hi).contains(&q0))
    }

    fn intervals(&self, floor_qu: i128) -> Vec<(i128, i128)> {
        let lo = self.q0_min as i128;
        let hi = self.hi(floor_qu);
        let mut out = Vec::with_capacity(2);
        if lo <= hi {
            out.push((lo, hi));
            if self.allow_negative {
                out.push((-hi, -lo.max(1)));
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Flavor {
    Mt { p: Prime },
    Gmt { v: PAdicApprox, window: Q0Window },
    Furstenberg { p1: Prime, p2: Prime },
    Dadic { d: DSeq },
}

impl Flavor {
    pub fn name(&self) -> &'static str {
        match self {
            Flavor::Mt { .. } => "mt",
            Flavor::Gmt { .. } => "gmt",
            Flavor::Furstenberg { .. } => "furstenberg",
            Flavor::Dadic { .. } => "dadic",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProductQuery {
    pub u: RealParam,
    pub flavor: Flavor,
    pub q_max: u64,
    pub mode: PrecisionMode,
    /// Stop at the first record strictly below this value.
    pub stop_below: Option<f64>,
}

impl ProductQuery {
    pub fn new(u: RealParam, flavor: Flavor, q_max: u64) -> Self {
        ProductQuery { u, flavor, q_max, mode: PrecisionMode::default(), stop_below: None }
    }

    pub fn mt(u: RealParam, p: Prime, q_max: u64) -> Self {
        Self::new(u, Flavor::Mt { p }, q_max)
    }

    pub fn gmt(u: RealParam, v: PAdicApprox, window: Q0Window, q_max: u64) -> Self {
        Self::new(u, Flavor::Gmt { v, window }, q_max)
    }

    pub fn furstenberg(u: RealParam, p1: Prime, p2: Prime, q_max: u64) -> Self {
        Self::new(u, Flavor::Furstenberg { p1, p2 }, q_max)
    }

    pub fn dadic(u: RealParam, d: DSeq, q_max: u64) -> Self {
        Self::new(u, Flavor::Dadic { d }, q_max)
    }

    pub fn with_mode(mut self, mode: PrecisionMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn stop_below(mut self, threshold: f64) -> Self {
        self.stop_below = Some(threshold);
        self
    }
}

const CHUNK: u64 = 1 << 13;
const MAX_HORIZON: u64 = 1 << 62;

/// Best `q0` for one `q` over the candidate ladder.
///
/// Level `j` holds the members of the class `q0 = qv mod p^j` closest to
/// `qu` inside each admissible interval; level 0 is the plain nearest
/// integers. If `q0*` is optimal and `p^j || (q v - q0*)`, the closest
/// member of level `j` is at least as good, so the ladder is exact up to
/// the first level whose classes have at most one member in the window.
/// Beyond the stored digits of `v` it can only be a heuristic.
pub fn gmt_best_for_q(
    u: &RealEval,
    v: &PAdicEval,
    window: &Q0Window,
    q: i128,
    mode: PrecisionMode,
) -> Result<Option<(i128, ProductValue)>> {
    let f = u.floor_mul(q)?;
    let intervals = window.intervals(f);
    if intervals.is_empty() {
        return Ok(None);
    }
    let hi = window.hi(f);
    let mut cands: Vec<i128> = Vec::with_capacity(64);
    let push_class = |r: i128, m: i128, cands: &mut Vec<i128>| {
        for &(lo, hi) in &intervals {
            let below = r + m * (f - r).div_euclid(m);
            let first = r + m * (lo - r).div_euclid(m) + if (lo - r).rem_euclid(m) == 0 { 0 } else { m };
            let last = r + m * (hi - r).div_euclid(m);
            for c in [below, below + m, first, last] {
                if (lo..=hi).contains(&c) {
                    cands.push(c);
                }
            }
        }
    };
    push_class(0, 1, &mut cands);
    if let Some(res) = v.scaled_residues(q) {
        let p = v.prime().get() as i128;
        let mut m = 1i128;
        let mut j = 0u32;
        // stop once a class has at most one member in [-hi, hi]
        while m <= 2 * hi && j < res.depth() {
            j += 1;
            m = match m.checked_mul(p) {
                Some(x) => x,
                None => break,
            };
            match res.residue(j) {
                Some(r) => push_class(r, m, &mut cands),
                None => break,
            }
        }
    }
    cands.sort_unstable();
    cands.dedup();
    let mut best: Option<(i128, ProductValue)> = None;
    for c in cands {
        if q == 0 && c == 0 {
            continue;
        }
        let val = gmt_product(u, v, q, c, mode)?;
        if best.as_ref().is_none_or(|(_, b)| val.lt(b)) {
            best = Some((c, val));
        }
    }
    Ok(best)
}

enum Compiled {
    Scaled(Box<dyn Fn(u64) -> u128 + Sync>),
    Gmt(PAdicEval, Q0Window),
}

fn evaluate(u: &RealEval, c: &Compiled, q: u64, mode: PrecisionMode) -> Result<Option<Record>> {
    match c {
        Compiled::Scaled(mult) => {
            let m = mult(q);
            let (d, near) = u.dist_nearest(q as i128)?;
            let value = m as f64 * d;
            let ext = if mode.wants_extended(value) {
                Some(u.offset_ext(q as i128, near)?.abs().mul_int(&m.into()))
            } else {
                None
            };
            Ok(Some(Record { q, q0: None, product: ProductValue { value, ext, upper_bound: false } }))
        }
        Compiled::Gmt(v, w) => Ok(gmt_best_for_q(u, v, w, q as i128, mode)?
            .map(|(q0, product)| Record { q, q0: Some(q0), product })),
    }
}

fn scan_range(u: &RealEval, c: &Compiled, lo: u64, hi: u64, mode: PrecisionMode) -> Result<RecordSequence> {
    let mut best: Option<ProductValue> = None;
    let mut records = Vec::new();
    for q in lo..=hi {
        if let Some(r) = evaluate(u, c, q, mode)? {
            if best.as_ref().is_none_or(|b| r.product.lt(b)) {
                best = Some(r.product.clone());
                records.push(r);
            }
        }
    }
    Ok(RecordSequence { records, horizon: hi })
}

/// Record minima of the query's product over `q = 1..=q_max`.
///
/// Disjoint chunks of the range are scanned in parallel and merged in `q`
/// order, so the result does not depend on the thread count. With
/// `stop_below`, chunks run in ordered batches and the scan ends at the
/// first record under the threshold.
pub fn record_scan(query: &ProductQuery) -> Result<RecordSequence> {
    if query.q_max == 0 {
        return Err(Error::InvalidInput("Q_max must be at least 1".into()));
    }
    if query.q_max > MAX_HORIZON {
        return Err(Error::HorizonOverflow(query.q_max));
    }
    let u = RealEval::new(query.u.clone());
    let compiled = match &query.flavor {
        Flavor::Mt { p } => {
            let p = *p;
            Compiled::Scaled(Box::new(move |q| mt_multiplier(q, p)))
        }
        Flavor::Furstenberg { p1, p2 } => {
            if p1 == p2 {
                return Err(Error::InvalidInput("the two primes must differ".into()));
            }
            let (p1, p2) = (*p1, *p2);
            Compiled::Scaled(Box::new(move |q| furstenberg_multiplier(q, p1, p2)))
        }
        Flavor::Dadic { d } => {
            let d = d.clone();
            Compiled::Scaled(Box::new(move |q| dadic_multiplier(q, &d)))
        }
        Flavor::Gmt { v, window } => Compiled::Gmt(PAdicEval::new(v.clone()), *window),
    };
    if query.stop_below.is_none() {
        // the scan would fail at the end anyway; fail before doing the work
        u.check_precision(query.q_max as i128)?;
    }
    let n_chunks = query.q_max.div_ceil(CHUNK);
    let batch = match query.stop_below {
        Some(_) => rayon::current_num_threads().max(1) as u64 * 2,
        None => 1024,
    };
    let mut acc = RecordSequence::empty(0);
    for first in (0..n_chunks).step_by(batch as usize) {
        let group: Vec<(u64, u64)> = (first..(first + batch).min(n_chunks))
            .map(|i| (i * CHUNK + 1, ((i + 1) * CHUNK).min(query.q_max)))
            .collect();
        let parts: Vec<RecordSequence> = group
            .par_iter()
            .map(|&(lo, hi)| scan_range(&u, &compiled, lo, hi, query.mode))
            .collect::<Result<_>>()?;
        for part in parts {
            acc = acc.merge(part);
        }
        if let Some(t) = query.stop_below {
            if acc.truncate_below(t) {
                return Ok(acc);
            }
        }
    }
    acc.horizon = query.q_max;
    Ok(acc)
}

fn expect_flavor(query: &ProductQuery, name: &str) -> Result<()> {
    if query.flavor.name() != name {
        return Err(Error::InvalidInput(format!(
            "expected a {name} query, got {}",
            query.flavor.name()
        )));
    }
    Ok(())
}

pub fn mt_record_scan(query: &ProductQuery) -> Result<RecordSequence> {
    expect_flavor(query, "mt")?;
    record_scan(query)
}

pub fn gmt_record_scan(query: &ProductQuery) -> Result<RecordSequence> {
    expect_flavor(query, "gmt")?;
    record_scan(query)
}

pub fn furstenberg_record_scan(query: &ProductQuery) -> Result<RecordSequence> {
    expect_flavor(query, "furstenberg")?;
    record_scan(query)
}

pub fn dadic_record_scan(query: &ProductQuery) -> Result<RecordSequence> {
    expect_flavor(query, "dadic")?;
    record_scan(query)
}
