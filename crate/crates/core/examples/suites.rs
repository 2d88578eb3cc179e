// Run the seeded property suites from code and print their reports.

use valtree::suites::{run_suite, SuiteConfig, SUITES};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let config = SuiteConfig { cases: Some(10), ..SuiteConfig::default() };
    for name in SUITES {
        let report = run_suite(name, &config)?;
        print!("{report}");
        assert!(report.passed());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
