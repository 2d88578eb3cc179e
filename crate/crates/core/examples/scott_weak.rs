// Finite-poset checks for the weak tree topology and the Scott topology.

use valtree::topology::{is_scott_open_finite, is_upper_set, scott_weak_witness, weak_class_in_sample, FinitePoset, PosetOrder};
use valtree::ValuationChain;

fn chain(s: &str) -> ValuationChain {
    ValuationChain::parse(s).expect("valid chain text")
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let g = chain("val { p: 2, root: (0) }");
    let mu1 = chain("val { p: 2, root: (0), steps: [(x, (1/2))] }");
    let mu2 = chain("val { p: 2, root: (0), steps: [(x, (1/2)), (x^2 + 2, (3/2))] }");
    let poset = FinitePoset::new(vec![g.clone(), mu1.clone(), mu2.clone()], vec!["three-element chain".into()])?;

    let class = weak_class_in_sample(&poset, 1, 2)?;
    println!("[mu2]_mu1 = {class:?}");
    println!("upper set for the order rooted at G: {}", is_upper_set(&poset, &class, PosetOrder::Rooted(0))?);
    let scott = is_scott_open_finite(&poset, &class, PosetOrder::Rooted(0))?;
    println!("Scott open: {} ({})", scott.scott_open, scott.caveat);

    let sample = vec![g, mu1.clone(), mu2.clone(), chain("val { p: 2, root: (0), steps: [(x, (2))] }")];
    let report = scott_weak_witness(&mu2, &mu1, &sample)?;
    println!("[mu1]_mu2 holds mu1 but not the larger mu2: {}", report.nu_in_class && report.mu_outside_class);
    println!("separated at {} with disjoint classes: {}", report.eta, report.classes_disjoint);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
