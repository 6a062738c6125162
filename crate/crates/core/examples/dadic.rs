//! Products with a composite D-adic norm.
use padic_littlewood::contfrac::QuadIrr;
use padic_littlewood::diophantine::{dadic_record_scan, ProductQuery, RealParam};
use padic_littlewood::padic::DSeq;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let u = RealParam::Quadratic(QuadIrr::new(1, 1, 2, 5)?);
    for d in [DSeq::powers(2)?, DSeq::powers(6)?, DSeq::new(vec![2, 3], vec![5])?] {
        let rs = dadic_record_scan(&ProductQuery::dadic(u.clone(), d.clone(), 1_000_000))?;
        let r = rs.argmin().expect("nonempty");
        println!("D = {d}: {} records, min {:.6e} at q = {}", rs.records.len(), r.value(), r.q);
    }
    Ok(())
}
