//! Record minima of q |q|_p <qu> for a quadratic irrational.
use padic_littlewood::diophantine::{mt_record_scan, ProductQuery, RealParam};
use padic_littlewood::contfrac::QuadIrr;
use padic_littlewood::padic::Prime;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let u = RealParam::Quadratic(QuadIrr::sqrt(2)?);
    for p in [2, 3, 5] {
        let rs = mt_record_scan(&ProductQuery::mt(u.clone(), Prime::new(p)?, 1_000_000))?;
        println!("p = {p}:");
        for r in &rs.records {
            println!("  q = {:>8}  value = {:.6e}", r.q, r.value());
        }
    }
    Ok(())
}
