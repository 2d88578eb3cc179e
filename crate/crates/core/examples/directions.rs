// Tangent directions at a point: partition a sample into the classes `[ν]_μ`.

use valtree::tree::classify_directions;
use valtree::ValuationChain;

fn chain(s: &str) -> ValuationChain {
    ValuationChain::parse(s).expect("valid chain text")
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mu = chain("val { p: 2, root: (0), steps: [(x, (1/2))] }");
    let sample = vec![
        chain("val { p: 2, root: (0) }"),
        chain("val { p: 2, root: (0), steps: [(x, (1/2)), (x^2 + 2, (3/2))] }"),
        chain("val { p: 2, root: (0), steps: [(x, (1/2)), (x^2 + 2, (2))] }"),
        chain("val { p: 2, root: (0), steps: [(x, (3/4))] }"),
    ];
    let part = classify_directions(&mu, &sample)?;
    for (k, class) in part.classes.iter().enumerate() {
        let label = match (&part.tangents[k], part.below_class == Some(k)) {
            (_, true) => "not above mu".to_string(),
            (Some(t), _) => format!("direction {t}"),
            (None, _) => "direction".to_string(),
        };
        let members: Vec<String> = class.iter().map(|&i| sample[i].to_string()).collect();
        println!("{label}:");
        for m in members {
            println!("    {m}");
        }
    }
    assert!(part.violations.is_empty());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
