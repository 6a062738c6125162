//! Two-prime products q |q|_2 |q|_3 <qu> and the rescaling identity u -> 2u.
use padic_littlewood::diophantine::{f_delta_invariance_check, furstenberg_record_scan, ProductQuery, RealParam};
use padic_littlewood::padic::Prime;
use rand::{Rng, SeedableRng};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (p1, p2) = (Prime::new(2)?, Prime::new(3)?);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    for _ in 0..8 {
        let u: f64 = rng.gen();
        let q = ProductQuery::furstenberg(RealParam::Float(u), p1, p2, 1_000_000).stop_below(0.01);
        let rs = furstenberg_record_scan(&q)?;
        let r = rs.argmin().expect("nonempty");
        println!("u = {u:.12}: first value below 0.01 at q = {} ({:.3e})", r.q, r.value());
    }
    let u = RealParam::Float(0.3183098861837907);
    for q in [7, 1234, 99_991] {
        let c = f_delta_invariance_check(&u, q, p1, p2)?;
        println!("q = {q}: {:.15e} vs {:.15e}, difference {:e}", c.lhs, c.rhs, c.difference);
    }
    Ok(())
}
