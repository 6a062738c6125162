//! Expansions of p^k u and the products at their convergent denominators.
use num_rational::BigRational;
use padic_littlewood::contfrac::{cf_expand_quad, cf_expand_rational, mt_liminf_witnesses_from_cf, scaled_quotient_sup, CfBudget, QuadIrr};
use padic_littlewood::padic::Prime;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let r = BigRational::new(355.into(), 113.into());
    println!("355/113 = {:?}", cf_expand_rational(&r).preperiod.iter().map(|x| x.to_string()).collect::<Vec<_>>());

    let p = Prime::new(2)?;
    let s2 = QuadIrr::sqrt(2)?;
    for k in 0..4u32 {
        let scaled = s2.mul_int(&num_traits::pow(num_bigint::BigInt::from(2), k as usize));
        let e = cf_expand_quad(&scaled);
        let show = |v: &[num_bigint::BigInt]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        println!("2^{k} sqrt 2 = [{}; ({})]", show(&e.preperiod), show(&e.period));
    }
    let sup = scaled_quotient_sup(&s2, p, 12, 200);
    println!("largest quotient for k <= 12: {} (k = {}, position {})", sup.value, sup.k, sup.position);

    let ws = mt_liminf_witnesses_from_cf(&s2, p, CfBudget { k_max: 12, len_max: 60 });
    for w in ws.iter().take(5) {
        println!("q = {} (k = {}, n = {}): {:.6e}", w.q, w.k, w.n, w.product);
    }
    Ok(())
}
