// Build augmentation chains, evaluate polynomials, and check the valuation axioms.

use valtree::valuation::{check_axioms, default_sample};
use valtree::{GroupValue, LexValue, Poly, ValuationChain};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let gauss = ValuationChain::gauss(2)?;
    let mu1 = gauss.augment(&Poly::parse("x")?, &GroupValue::parse("(1/2)")?)?;
    let mu2 = mu1.augment(&Poly::parse("x^2 + 2")?, &GroupValue::parse("(3/2)")?)?;
    let sample = default_sample(&mu2, 40, 7);
    let mu2 = mu2.validate(&sample)?;
    println!("mu2 = {mu2}");

    for f in ["x^3 + 2*x", "x^2 + 2", "2*x^2 + 3*x + 4", "0"] {
        println!("  mu2({f}) = {}", mu2.evaluate(&Poly::parse(f)?));
    }
    let (degree, value) = mu2.degree_sv();
    println!("  kind: {}, last key of degree {degree} with value {value}", mu2.classify());

    let text = mu2.to_string();
    assert_eq!(ValuationChain::parse(&text)?, mu2);

    // x^2 is not a key polynomial for the Gauss valuation, so this is not a valuation.
    let fake = ValuationChain::monomial(2, LexValue::zero())?.push_step_unchecked(Poly::parse("x^2")?, GroupValue::int(1));
    let report = check_axioms(&fake, &default_sample(&fake, 20, 1))?;
    match report.violation {
        Some(v) => println!("non-key augmentation: {v}"),
        None => println!("non-key augmentation passed {} pairs", report.pairs_checked),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
