// Quasi-cuts of Q, their canonical rank-2 representatives, and suprema of sequences.

use valtree::quasicut::{qc_of_value, qc_representative, qc_sup, sme_equivalent, LimitDescriptor, RationalSequence, SequenceRule};
use valtree::GroupValue;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for v in ["(3/2)", "(1,-1)", "(1,-7)", "(1,2)", "inf"] {
        let cut = qc_of_value(&GroupValue::parse(v)?)?;
        println!("{v:>8} -> {cut:<8} representative {}", qc_representative(&cut));
    }
    let same = sme_equivalent(&GroupValue::parse("(1,-1)")?, &GroupValue::parse("(1,-7)")?)?;
    println!("(1,-1) and (1,-7) define the same cut: {same}");

    let seq = RationalSequence::rule(SequenceRule::parse("1 - 1/2^i")?, LimitDescriptor::parse("1-")?);
    println!("sup of 1 - 1/2^i: {}", qc_sup(&seq)?);
    let seq = RationalSequence::rule(SequenceRule::parse("i")?, LimitDescriptor::parse("inf")?);
    println!("sup of i: {}", qc_sup(&seq)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
