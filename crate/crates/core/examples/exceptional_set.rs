//! Grid points u whose product stays above delta up to Q, for growing Q.
use padic_littlewood::dimension::{exceptional_scan, UGrid};
use padic_littlewood::diophantine::Q0Window;
use padic_littlewood::padic::{PAdicApprox, Prime};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = Prime::new(2)?;
    let v = PAdicApprox::zero(p);
    let grid = UGrid::new(0.0, 1.0, 2000);
    for q_max in [10, 100, 1000, 10_000] {
        let s = exceptional_scan(&v, 1e-3, q_max, &grid, Q0Window::default())?;
        println!("Q = {q_max:>6}: {} of {} survive", s.survivor_count(), grid.n);
    }
    Ok(())
}
