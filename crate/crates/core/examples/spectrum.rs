// Membership in the subbasic sets `U(f, g)` of the valuation spectrum and
// the two density witnesses.

use valtree::topology::{density_witness, spectrum_member, Density};
use valtree::{Poly, ValuationChain};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let gauss = ValuationChain::gauss(2)?;
    let nu = ValuationChain::parse("val { p: 2, root: (0), steps: [(x, (1))] }")?;
    let (x, two) = (Poly::parse("x")?, Poly::parse("2")?);
    println!("Gauss in U(x, 2): {}", spectrum_member(&gauss, &x, &two)?);
    println!("[G; x, 1] in U(x, 2): {}", spectrum_member(&nu, &x, &two)?);

    for (f, g) in [("x^2", "x"), ("2*x", "x"), ("x", "2*x")] {
        match density_witness(2, &Poly::parse(f)?, &Poly::parse(g)?)? {
            Density::Witnesses { value_transcendental, residue_transcendental, .. } => {
                println!("U({f}, {g}): h -> {} ({}) and h -> {} ({})",
                    value_transcendental.value_of_h, value_transcendental.classification,
                    residue_transcendental.value_of_h, residue_transcendental.classification);
            }
            Density::Everything { ratio } => println!("U({f}, {g}) is everything (ratio {ratio})"),
            Density::Empty { ratio } => println!("U({f}, {g}) is empty (ratio {ratio})"),
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
