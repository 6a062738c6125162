use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::QuadIrr;
use crate::padic::ExtReal;

/// An exact real accepted by the continued-fraction engine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactReal {
    Rational(BigRational),
    Quadratic(QuadIrr),
}

/// A finite or eventually periodic simple continued fraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CFExpansion {
    pub preperiod: Vec<BigInt>,
    pub period: Vec<BigInt>,
    pub exact: bool,
}

impl CFExpansion {
    pub fn is_periodic(&self) -> bool {
        !self.period.is_empty()
    }

    /// Partial quotient `a_i`, `None` past the end of a finite expansion.
    pub fn quotient(&self, i: usize) -> Option<&BigInt> {
        if i < self.preperiod.len() {
            Some(&self.preperiod[i])
        } else if self.period.is_empty() {
            None
        } else {
            Some(&self.period[(i - self.preperiod.len()) % self.period.len()])
        }
    }

    pub fn quotients(&self) -> impl Iterator<Item = &BigInt> + '_ {
        (0..).map_while(move |i| self.quotient(i))
    }

    /// Convergents `(p_n, q_n)` in order.
    pub fn convergents(&self) -> Convergents<impl Iterator<Item = BigInt> + '_> {
        Convergents::new(self.quotients().cloned())
    }
}

impl fmt::Display for CFExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[BigInt]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        let mut all = self.preperiod.clone();
        if self.period.is_empty() {
            let (head, rest) = all.split_at(1.min(all.len()));
            write!(f, "[{}", join(head))?;
            if !rest.is_empty() {
                write!(f, "; {}", join(rest))?;
            }
            return write!(f, "]");
        }
        let head = all.remove(0);
        write!(f, "[{head}; ")?;
        if !all.is_empty() {
            write!(f, "{}, ", join(&all))?;
        }
        write!(f, "({})]", join(&self.period))
    }
}

/// Running convergents of a quotient stream.
pub struct Convergents<I> {
    quotients: I,
    prev: (BigInt, BigInt),
    cur: (BigInt, BigInt),
}

impl<I: Iterator<Item = BigInt>> Convergents<I> {
    pub fn new(quotients: I) -> Self {
        Convergents {
            quotients,
            prev: (BigInt::zero(), BigInt::one()),
            cur: (BigInt::one(), BigInt::zero()),
        }
    }

    /// Feeds one quotient by hand; returns `(q_{n-1}, q_n)`.
    pub fn push(&mut self, a: BigInt) -> (BigInt, BigInt) {
        let p = &a * &self.cur.0 + &self.prev.0;
        let q = &a * &self.cur.1 + &self.prev.1;
        self.prev = std::mem::replace(&mut self.cur, (p, q));
        (self.prev.1.clone(), self.cur.1.clone())
    }
}

impl<I: Iterator<Item = BigInt>> Iterator for Convergents<I> {
    type Item = (BigInt, BigInt);
    fn next(&mut self) -> Option<Self::Item> {
        let a = self.quotients.next()?;
        self.push(a);
        Some(self.cur.clone())
    }
}

/// Gauss-map state `(P + sqrt(D)) / Q` with `Q | D - P^2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SurdState {
    pub p: BigInt,
    pub q: BigInt,
}

/// Exact Gauss map over a quadratic surd; yields each partial quotient
/// together with the complete quotient that follows it.
#[derive(Clone, Debug)]
pub struct SurdQuotients {
    d: BigInt,
    root: BigInt,
    state: SurdState,
}

impl SurdQuotients {
    pub fn new(u: &QuadIrr) -> Self {
        let c = u.c();
        let big_d = u.b() * u.b() * u.d() * c * c;
        let (p, q) = if u.b().is_positive() {
            (u.a() * c, c * c)
        } else {
            (-(u.a() * c), -(c * c))
        };
        SurdQuotients { root: big_d.sqrt(), d: big_d, state: SurdState { p, q } }
    }

    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn state(&self) -> &SurdState {
        &self.state
    }

    /// The current complete quotient in extended precision.
    pub fn complete_quotient(&self) -> ExtReal {
        let SurdState { p, q } = &self.state;
        if q.is_positive() {
            ExtReal::from_surd(p, &BigInt::one(), q, &self.d)
        } else {
            ExtReal::from_surd(&-p, &-BigInt::one(), &-q, &self.d)
        }
    }

    fn floor(&self) -> BigInt {
        let SurdState { p, q } = &self.state;
        if q.is_positive() {
            (p + &self.root).div_floor(q)
        } else {
            (-p - &self.root - 1u32).div_floor(&-q)
        }
    }

    /// Advances one step and returns the partial quotient consumed.
    pub fn step(&mut self) -> BigInt {
        let a = self.floor();
        let p = &a * &self.state.q - &self.state.p;
        let q = (&self.d - &p * &p) / &self.state.q;
        self.state = SurdState { p, q };
        a
    }
}

impl Iterator for SurdQuotients {
    type Item = BigInt;
    fn next(&mut self) -> Option<BigInt> {
        Some(self.step())
    }
}

pub fn cf_expand_rational(r: &BigRational) -> CFExpansion {
    // Euclid already ends on a quotient >= 2 unless the expansion has one term
    let mut n = r.numer().clone();
    let mut d = r.denom().clone();
    let mut out = Vec::new();
    while !d.is_zero() {
        let (a, rem) = n.div_mod_floor(&d);
        out.push(a);
        n = std::mem::replace(&mut d, rem);
    }
    CFExpansion { preperiod: out, period: Vec::new(), exact: true }
}

pub fn cf_expand_quad(u: &QuadIrr) -> CFExpansion {
    let mut it = SurdQuotients::new(u);
    let mut seen: HashMap<SurdState, usize> = HashMap::new();
    // a_0 always sits in the preperiod, as in [1; (2)] for sqrt 2
    let mut quotients = vec![it.step()];
    loop {
        if let Some(&start) = seen.get(it.state()) {
            let period = quotients.split_off(start);
            return CFExpansion { preperiod: quotients, period, exact: true };
        }
        seen.insert(it.state().clone(), quotients.len());
        quotients.push(it.step());
    }
}

pub fn cf_expand(u: &ExactReal) -> CFExpansion {
    match u {
        ExactReal::Rational(r) => cf_expand_rational(r),
        ExactReal::Quadratic(q) => cf_expand_quad(q),
    }
}
