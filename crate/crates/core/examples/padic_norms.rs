//! Exact valuations, Z[1/p] arithmetic, approximate p-adics and D-adic norms.
use padic_littlewood::padic::{d_adic_norm, padic_norm, DSeq, PAdicApprox, Prime, ZInvP};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = Prime::new(3)?;
    for q in [1, 9, 45, 162, -243] {
        println!("|{q}|_3 = {}", padic_norm(q, p)?);
    }

    let a = ZInvP::new(5, 2, p);
    let b = ZInvP::from_integer(7, p);
    println!("{a} + {b} = {}, valuation {:?}", &a + &b, (&a + &b).valuation());

    let v = PAdicApprox::from_digits(p, 0, &[2, 1, 0, 2, 1])?;
    println!("v = digits {:?}, v mod 3^4 = {}, |v|_3 = {:?}", v.digits(), v.residue_mod(4)?, v.norm());

    let six = DSeq::powers(6)?;
    let mixed = DSeq::new(vec![2, 3], vec![5])?;
    for q in [12, 36, 72, 300] {
        println!("|{q}|_D for D = 6^n: {}   for D = 2,3,5,5,...: {}", d_adic_norm(q, &six)?, d_adic_norm(q, &mixed)?);
    }
    Ok(())
}
