// The tree order: comparisons with witnesses, meets, and points strictly between.

use valtree::tree::tangent_direction;
use valtree::{compare, meet, strict_between, ValuationChain};

fn chain(s: &str) -> ValuationChain {
    ValuationChain::parse(s).expect("valid chain text")
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mu1 = chain("val { p: 2, root: (0), steps: [(x, (1/2))] }");
    let mu2 = chain("val { p: 2, root: (0), steps: [(x, (1/2)), (x^2 + 2, (3/2))] }");
    let a = chain("val { p: 2, root: (0), steps: [(x, (1))] }");
    let b = chain("val { p: 2, root: (0), steps: [(x + 1, (1))] }");

    let c = compare(&mu1, &mu2)?;
    println!("mu1 vs mu2: {} (rises at {:?})", c.verdict, c.rises.map(|w| w.to_string()));
    println!("tangent direction from mu1 towards mu2: {}", tangent_direction(&mu1, &mu2)?);

    let c = compare(&a, &b)?;
    println!("a vs b: {}", c.verdict);
    let m = meet(&a, &b)?;
    println!("meet(a, b) = {m} ({})", m.classify());

    let between = strict_between(&mu1, &mu2)?;
    println!("strictly between mu1 and mu2: {}", between.eta);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
