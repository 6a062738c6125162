#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use padic_littlewood::contfrac::QuadIrr;
use padic_littlewood::diophantine::RealParam;
use padic_littlewood::padic::{PAdicApprox, Prime};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
pub struct FuzzConfig {
    pub u: RealParam,
    pub v: PAdicApprox,
    pub p: Prime,
    pub delta: f64,
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn nonsquare(r: &mut ChaCha8Rng) -> u64 {
    loop {
        let n = r.gen_range(2..60u64);
        let s = (n as f64).sqrt() as u64;
        if s * s != n && (s + 1) * (s + 1) != n {
            return n;
        }
    }
}

pub fn random_u(r: &mut ChaCha8Rng) -> RealParam {
    match r.gen_range(0..3) {
        0 => {
            let b = r.gen_range(2..60i64);
            let a = loop {
                let a = r.gen_range(-3 * b..3 * b);
                if a != 0 {
                    break a;
                }
            };
            RealParam::Rational(BigRational::new(BigInt::from(a), BigInt::from(b)))
        }
        1 => RealParam::Quadratic(QuadIrr::sqrt(nonsquare(r)).unwrap()),
        _ => {
            let (a, b, c) = (r.gen_range(-5..6i64), r.gen_range(1..4i64), r.gen_range(1..6i64));
            RealParam::Quadratic(QuadIrr::new(a, b * if r.gen() { 1 } else { -1 }, c, nonsquare(r)).unwrap())
        }
    }
}

pub fn random_v(r: &mut ChaCha8Rng, p: Prime) -> PAdicApprox {
    match r.gen_range(0..3) {
        0 => PAdicApprox::zero(p),
        1 => PAdicApprox::from_integer(r.gen_range(-30..30i64), p),
        _ => {
            let digits: Vec<u32> = (0..60).map(|_| r.gen_range(0..p.get() as u32)).collect();
            PAdicApprox::from_digits(p, 0, &digits).unwrap()
        }
    }
}

/// Mixed exact u, mixed v, primes 2, 3, 5, delta in [0.3, 0.95).
pub fn correspondence_configs(n: usize, seed: u64) -> Vec<FuzzConfig> {
    let mut r = rng(seed);
    (0..n)
        .map(|_| {
            let p = Prime::new([2, 3, 5][r.gen_range(0..3)]).unwrap();
            FuzzConfig { u: random_u(&mut r), v: random_v(&mut r, p), p, delta: r.gen_range(0.3..0.95) }
        })
        .collect()
}
