//! Shortest-vector heights along the cone orbit of x_{u,v}; writes CSV to stdout.
use padic_littlewood::contfrac::QuadIrr;
use padic_littlewood::diophantine::RealParam;
use padic_littlewood::lattice::{cone_orbit_profile, Cone, ConeGrid, LatticePoint, SearchCap};
use padic_littlewood::padic::{PAdicApprox, Prime};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = Prime::new(2)?;
    let x = LatticePoint::x_uv(RealParam::Quadratic(QuadIrr::sqrt(2)?), PAdicApprox::zero(p));
    let profile = cone_orbit_profile(&x, &Cone::c(), ConeGrid::new(12.0, 8), SearchCap::default())?;
    eprintln!("{} cells, all certified: {}", profile.cells.len(), profile.all_certified());
    for (t, h) in profile.escape_curve().iter().step_by(8) {
        eprintln!("  sup height up to t = {t:>5}: {h:.4}");
    }
    profile.write_csv(std::io::stdout())?;
    Ok(())
}
