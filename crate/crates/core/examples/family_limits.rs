// Increasing families and their suprema: stability, the limit key polynomial,
// the augmented limit, and checks that it is the least upper bound.

use valtree::limits::{limit_key_poly, net_limit_check, supremum, verify_supremum, Subbasic, DEFAULT_CUTOFF};
use valtree::valuation::default_sample;
use valtree::{IncreasingFamily, Poly, ValuationChain};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let fam = IncreasingFamily::parse(
        r#"fam { base: val { p: 2, root: (0) }, key: x, gamma: "1 - 1/2^i", limit: "1-" }"#,
    )?;
    for f in ["x", "x + 1", "x + 2", "4"] {
        println!("{f:>6}: {}", fam.is_stable(&Poly::parse(f)?, DEFAULT_CUTOFF)?);
    }
    println!("limit key polynomial: {}", limit_key_poly(&fam, 4, DEFAULT_CUTOFF)?.poly);

    let limit = supremum(&fam, DEFAULT_CUTOFF)?;
    let chain = limit.as_chain().expect("parametric limits are chains");
    println!("supremum: {chain} ({})", limit.classify());

    let rival = ValuationChain::parse("val { p: 2, root: (0), steps: [(x, (1))] }")?;
    let report = verify_supremum(&limit, &fam, std::slice::from_ref(&rival), &default_sample(&rival, 30, 3), DEFAULT_CUTOFF)?;
    println!("upper bound {}, minimal {}, independent of Q {}", report.upper_bound, report.minimal, report.q_independent);

    let mu = ValuationChain::parse("val { p: 2, root: (0), steps: [(x, (1/2))] }")?;
    let net = net_limit_check(&fam, &limit, &[Subbasic { mu, nu: chain }])?;
    println!("members enter the neighbourhood from index {:?}", net.thresholds[0]);

    let unbounded = IncreasingFamily::parse(r#"fam { base: val { p: 2, root: (0) }, key: x, gamma: "i", limit: "inf" }"#)?;
    let top = supremum(&unbounded, DEFAULT_CUTOFF)?;
    println!("unbounded family: {} takes 12*x + 40 to {}", top.classify(), top.evaluate(&Poly::parse("12*x + 40")?)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
