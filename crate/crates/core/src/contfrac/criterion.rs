use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Convergents, QuadIrr, SurdQuotients};
use crate::padic::{valuation, ExtReal, Prime, EXT_FRAC_BITS};

/// Largest partial quotient seen over a finite horizon, with its location.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientSup {
    pub value: BigInt,
    /// Exponent `k` of the scaled number `p^k u`.
    pub k: u32,
    /// Position of the quotient in the expansion, `>= 1`.
    pub position: usize,
}

/// Sup of the partial quotients `a_1..a_len_max` of `p^k u` for
/// `k = 0..=k_max`. The integer part `a_0` is left out: it grows with
/// `p^k` and says nothing about approximation.
pub fn scaled_quotient_sup(u: &QuadIrr, p: Prime, k_max: u32, len_max: usize) -> QuotientSup {
    assert!(len_max >= 1);
    let pb = BigInt::from(p.get());
    let mut best = QuotientSup { value: BigInt::zero(), k: 0, position: 0 };
    let mut scaled = u.clone();
    for k in 0..=k_max {
        let mut it = SurdQuotients::new(&scaled);
        it.step();
        for pos in 1..=len_max {
            let a = it.step();
            if a > best.value {
                best = QuotientSup { value: a, k, position: pos };
            }
        }
        scaled = scaled.mul_int(&pb);
    }
    best
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CfBudget {
    pub k_max: u32,
    pub len_max: usize,
}

/// A denominator `q = q_n p^k` built from the `n`-th convergent of `p^k u`.
#[derive(Clone, Debug, PartialEq)]
pub struct CfWitness {
    pub q: BigInt,
    pub k: u32,
    pub n: usize,
    pub product: f64,
    pub exact: ExtReal,
}

/// Products `|q| |q|_p <qu>` at the rescaled convergent denominators of
/// `p^k u`, deduplicated by `q` and sorted ascending.
///
/// With `alpha = p^k u` and complete quotient `x_{n+1}`,
/// `|q_n alpha - p_n| = 1 / (q_n x_{n+1} + q_{n-1})`, which keeps the
/// evaluation exact to the working format even for huge `q_n`.
pub fn mt_liminf_witnesses_from_cf(u: &QuadIrr, p: Prime, budget: CfBudget) -> Vec<CfWitness> {
    let pb = BigInt::from(p.get());
    let one = ExtReal::from_mantissa(BigInt::one() << EXT_FRAC_BITS as usize);
    let mut out: Vec<CfWitness> = Vec::new();
    let mut alpha = u.clone();
    let mut pk = BigInt::one();
    for k in 0..=budget.k_max {
        let mut surd = SurdQuotients::new(&alpha);
        let mut conv = Convergents::new(std::iter::empty());
        for n in 0..budget.len_max {
            let a = surd.step();
            let (q_prev, q_n) = conv.push(a);
            let x_next = surd.complete_quotient();
            // q_n x_{n+1} + q_{n-1}
            let denom = ExtReal::from_mantissa(
                x_next.mantissa() * &q_n + (&q_prev << EXT_FRAC_BITS as usize),
            );
            let shift = EXT_FRAC_BITS as usize;
            let err = ExtReal::from_ratio(&(BigInt::one() << shift), denom.mantissa());
            let other = ExtReal::from_mantissa(one.mantissa() - err.mantissa());
            let v = valuation(&q_n, p).expect("convergent denominators are positive");
            let unit = &q_n / num_traits::pow(pb.clone(), v as usize);
            // unit / denom in one division: err itself underflows once q_n > 2^96
            let exact = if err <= other {
                ExtReal::from_ratio(&(&unit << shift), denom.mantissa())
            } else {
                ExtReal::from_mantissa(other.mantissa() * &unit)
            };
            out.push(CfWitness { q: &q_n * &pk, k, n, product: exact.to_f64(), exact });
        }
        alpha = alpha.mul_int(&pb);
        pk *= &pb;
    }
    out.sort_by(|x, y| x.exact.cmp(&y.exact).then_with(|| x.q.cmp(&y.q)));
    let mut seen = std::collections::HashSet::new();
    out.retain(|w| seen.insert(w.q.clone()));
    out
}
