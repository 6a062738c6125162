//! Short orbit vectors turned into integer pairs with a small product.
use num_rational::BigRational;
use padic_littlewood::contfrac::QuadIrr;
use padic_littlewood::diophantine::RealParam;
use padic_littlewood::lattice::{correspondence_check_g, correspondence_check_mt, Correspondence, CorrespondenceCap};
use padic_littlewood::padic::{PAdicApprox, Prime};

fn report(label: &str, c: &Correspondence) {
    match c {
        Correspondence::Witness(w) => println!(
            "{label}: (t, n) = ({}, {}), norm {:.4}, (q, q0) = ({}, {}), product {:.4e} vs delta^3 {:.4e}",
            w.point.t, w.point.n, w.norm, w.q, w.q0, w.product, w.bound
        ),
        Correspondence::Inconclusive { min_norm } => println!("{label}: no short vector, min norm {min_norm:.4}"),
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = Prime::new(2)?;
    let r = RealParam::Rational(BigRational::new(3.into(), 7.into()));
    for delta in [0.9, 0.3, 0.05] {
        let c = correspondence_check_g(&r, &PAdicApprox::zero(p), delta, CorrespondenceCap::new(40.0, 30))?;
        report(&format!("u = 3/7, delta = {delta}"), &c);
    }
    let s2 = RealParam::Quadratic(QuadIrr::sqrt(2)?);
    report("u = sqrt 2 on C', delta = 0.5", &correspondence_check_mt(&s2, p, 0.5, CorrespondenceCap::new(25.0, 10))?);
    Ok(())
}
