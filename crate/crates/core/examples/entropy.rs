//! Maximal eps-separated families of orbit segments under the height metric.
use padic_littlewood::diophantine::RealParam;
use padic_littlewood::dimension::{separation_count_entropy, OrbitSegment};
use padic_littlewood::lattice::{cone_orbit_profile, Cone, ConeGrid, LatticePoint, SearchCap};
use padic_littlewood::padic::{PAdicApprox, Prime};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = Prime::new(2)?;
    let mut grid = ConeGrid::new(20.0, 0);
    grid.t_step = 1.0;
    let mut segs = Vec::new();
    for i in 1..=24 {
        let u = RealParam::Float(i as f64 / 25.0 + 1e-3);
        let x = LatticePoint::x_uv(u, PAdicApprox::zero(p));
        let prof = cone_orbit_profile(&x, &Cone::c(), grid, SearchCap::default())?;
        segs.push(OrbitSegment::from_profile(&prof, format!("u_{i}"))?);
    }
    for eps in [0.1, 0.5, 1.0] {
        for n in [5, 10, 20] {
            println!("eps = {eps}, N = {n:>2}: {} separated", separation_count_entropy(&segs, eps, n));
        }
    }
    Ok(())
}
