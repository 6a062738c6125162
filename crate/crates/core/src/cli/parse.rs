use num_bigint::BigInt;
use num_rational::BigRational;

use crate::contfrac::QuadIrr;
use crate::diophantine::RealParam;
use crate::error::{Error, Result};
use crate::lattice::Cone;
use crate::padic::{PAdicApprox, Prime};

fn int(s: &str) -> Result<BigInt> {
    s.trim().parse().map_err(|_| Error::Parse(format!("not an integer: {s:?}")))
}

/// `rat:a/b`, `rat:a`, `sqrt:n`, `quad:a,b,c,d` for `(a + b sqrt d) / c`,
/// or `dec:x` for a binary64 value.
pub fn parse_u(s: &str) -> Result<RealParam> {
    let (kind, body) = s.split_once(':').ok_or_else(|| Error::Parse(format!("u literal {s:?} lacks a kind prefix")))?;
    match kind {
        "rat" => {
            let r = match body.split_once('/') {
                Some((a, b)) => {
                    let den = int(b)?;
                    if den == BigInt::from(0) {
                        return Err(Error::Parse("zero denominator".into()));
                    }
                    BigRational::new(int(a)?, den)
                }
                None => BigRational::from_integer(int(body)?),
            };
            Ok(RealParam::Rational(r))
        }
        "sqrt" => Ok(RealParam::Quadratic(QuadIrr::new(0, 1, 1, int(body)?)?)),
        "quad" => {
            let parts: Vec<&str> = body.split(',').collect();
            let [a, b, c, d] = parts[..] else {
                return Err(Error::Parse(format!("quad literal needs a,b,c,d: {body:?}")));
            };
            Ok(RealParam::Quadratic(QuadIrr::new(int(a)?, int(b)?, int(c)?, int(d)?)?))
        }
        "dec" => {
            let x: f64 = body.trim().parse().map_err(|_| Error::Parse(format!("not a decimal: {body:?}")))?;
            if !x.is_finite() {
                return Err(Error::Parse(format!("not finite: {body:?}")));
            }
            Ok(RealParam::Float(x))
        }
        other => Err(Error::Parse(format!("unknown u kind {other:?}"))),
    }
}

/// `0`, `int:K`, or `padic:d0,d1,...` (digits from the units place up,
/// known to that many places).
pub fn parse_v(s: &str, p: Prime) -> Result<PAdicApprox> {
    if s.trim() == "0" {
        return Ok(PAdicApprox::zero(p));
    }
    let (kind, body) = s.split_once(':').ok_or_else(|| Error::Parse(format!("v literal {s:?} lacks a kind prefix")))?;
    match kind {
        "int" => Ok(PAdicApprox::from_integer(int(body)?, p)),
        "padic" => {
            let digits = body
                .split(',')
                .map(|d| d.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad digit {d:?}"))))
                .collect::<Result<Vec<u32>>>()?;
            PAdicApprox::from_digits(p, 0, &digits)
        }
        other => Err(Error::Parse(format!("unknown v kind {other:?}"))),
    }
}

pub fn parse_prime(n: u64) -> Result<Prime> {
    Prime::new(n)
}

/// `C`, `Cprime` (also `C'`).
pub fn parse_cone(s: &str) -> Result<Cone> {
    match s {
        "C" | "c" => Ok(Cone::c()),
        "Cprime" | "C'" | "cprime" => Ok(Cone::c_prime()),
        other => Err(Error::Parse(format!("unknown cone {other:?}"))),
    }
}

fn power(s: &str) -> Result<f64> {
    if let Some((b, e)) = s.split_once('^') {
        let b: f64 = b.trim().parse().map_err(|_| Error::Parse(format!("bad base {b:?}")))?;
        let e: i32 = e.trim().parse().map_err(|_| Error::Parse(format!("bad exponent {e:?}")))?;
        Ok(b.powi(e))
    } else {
        s.trim().parse().map_err(|_| Error::Parse(format!("bad number {s:?}")))
    }
}

/// `geo:2^-4..2^-12` (ratio 1/2 between rungs, or `geo:a..b/r` with
/// ratio `1/r`), or an explicit list `0.1,0.05,...`.
pub fn parse_ladder(s: &str) -> Result<Vec<f64>> {
    if let Some(body) = s.strip_prefix("geo:") {
        let (range, ratio) = match body.split_once('/') {
            Some((r, k)) => (r, power(k)?),
            None => (body, 2.0),
        };
        let (a, b) = range.split_once("..").ok_or_else(|| Error::Parse(format!("ladder range {range:?}")))?;
        let (a, b) = (power(a)?, power(b)?);
        if !(ratio > 1.0 && a > b && b > 0.0) {
            return Err(Error::Parse(format!("degenerate ladder {s:?}")));
        }
        let rungs = ((a / b).ln() / ratio.ln()).round() as usize + 1;
        return Ok((0..rungs).map(|i| a / ratio.powi(i as i32)).collect());
    }
    s.split(',').map(power).collect()
}

/// `head` and `tail` ratio lists: `6` (powers of 6) or `2,3;5` (ratios
/// 2, 3, then 5 forever).
pub fn parse_dseq(s: &str) -> Result<crate::padic::DSeq> {
    let list = |t: &str| -> Result<Vec<u64>> {
        if t.trim().is_empty() {
            return Ok(Vec::new());
        }
        t.split(',').map(|x| x.trim().parse().map_err(|_| Error::Parse(format!("bad ratio {x:?}")))).collect()
    };
    match s.split_once(';') {
        Some((h, t)) => crate::padic::DSeq::new(list(h)?, list(t)?),
        None => crate::padic::DSeq::new(Vec::new(), list(s)?),
    }
}
