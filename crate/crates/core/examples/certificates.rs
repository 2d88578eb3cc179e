// Certificates that a finite table of values is not the restriction of any valuation.

use valtree::topology::{certificate_check, nonvaluation_certificate, Subject};
use valtree::{Certificate, Table, ValuationChain};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let gauss = ValuationChain::gauss(2)?;
    for src in [
        "tab { (x) = (1); (x^2) = (3) }",
        "tab { (x) = (2); (x + 1) = (2); (2*x + 1) = (0) }",
        "tab { (1) = (1) }",
        "tab { (x) = (0); (x^2) = (0) }",
    ] {
        let table = Table::parse(src)?;
        match nonvaluation_certificate(2, &table)? {
            Some(cert) => {
                println!("{cert}");
                assert!(certificate_check(&cert, Subject::Table(&table))?);
                assert!(!certificate_check(&cert, Subject::Valuation(&gauss))?);
                assert_eq!(Certificate::parse(&cert.to_string())?, cert);
            }
            None => println!("{table}: no violation found"),
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
