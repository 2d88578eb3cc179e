// Separating neighbourhoods and sum preimages in the order topology of the value group.

use valtree::value::{separate, sum_preimage};
use valtree::{GroupValue, Interval};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for (a, b) in [("(0)", "(1)"), ("(1,-1)", "(1,0)"), ("(2)", "inf")] {
        let (u, w) = separate(&GroupValue::parse(a)?, &GroupValue::parse(b)?)?;
        println!("separate {a} < {b}: {u} below {w}");
    }
    for (a, b, target) in [("(1)", "(1)", "open((3/2), (5/2))"), ("inf", "(0)", "above((4))"), ("inf", "inf", "above((7))")] {
        let (v, w) = sum_preimage(&GroupValue::parse(a)?, &GroupValue::parse(b)?, &Interval::parse(target)?)?;
        println!("{a} + {b} in {target}: {v} + {w}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
