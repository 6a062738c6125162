//! Joint product |q| |qu - q0| |qv - q0|_p, minimised over q0 for each q.
use padic_littlewood::contfrac::QuadIrr;
use padic_littlewood::diophantine::{gmt_record_scan, ProductQuery, Q0Window, RealParam};
use padic_littlewood::padic::{PAdicApprox, Prime};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = Prime::new(2)?;
    let u = RealParam::Quadratic(QuadIrr::sqrt(2)?);
    let vs = [
        ("0", PAdicApprox::zero(p)),
        ("5", PAdicApprox::from_integer(5, p)),
        ("1 + 2^2 + 2^3 + 2^7 + ...", PAdicApprox::from_digits(p, 0, &[1, 0, 1, 1, 0, 0, 0, 1, 0, 1, 1, 0, 1, 0, 0, 1, 1, 1, 0, 1, 0, 1, 1, 0, 1, 0, 0, 0, 1, 1, 0, 1, 1, 0, 1, 0, 0, 1, 0, 1, 1])?),
    ];
    for (name, v) in vs {
        let rs = gmt_record_scan(&ProductQuery::gmt(u.clone(), v, Q0Window::default(), 100_000))?;
        let best = rs.argmin().expect("q = 1 is always a record");
        println!(
            "v = {name}: {} records, min {:.6e} at (q, q0) = ({}, {})",
            rs.records.len(),
            best.value(),
            best.q,
            best.q0.unwrap_or_default()
        );
    }
    Ok(())
}
