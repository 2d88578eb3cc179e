use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use valtree::error::Error;
use valtree::limits::{supremum, IncreasingFamily, LimitValuation, DEFAULT_CUTOFF};
use valtree::poly::Poly;
use valtree::suites::{run_suite, SuiteConfig, DEFAULT_SEED};
use valtree::topology::{certificate_check, nonvaluation_certificate, Subject, Table};
use valtree::tree::{classify_directions, compare, meet, strict_between};
use valtree::valuation::ValuationChain;

#[derive(Parser)]
#[command(name = "valtree", version, about = "Exact computations on the valuative tree of Q[x] over a p-adic base")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Verb {
    /// Value of a polynomial under a chain.
    Eval { chain: String, poly: String },
    /// Tree-order verdict between two chains, with witness polynomials.
    Compare { mu: String, nu: String },
    /// Greatest common lower bound of two chains.
    Meet { mu: String, nu: String },
    /// A chain strictly between μ < ν (or the meet of incomparable chains).
    Between { mu: String, nu: String },
    /// Partition of sample chains into directions at μ.
    Classes {
        mu: String,
        #[arg(required = true)]
        sample: Vec<String>,
    },
    /// Supremum of an increasing family.
    Limit {
        family: String,
        #[arg(long, default_value_t = DEFAULT_CUTOFF)]
        cutoff: usize,
    },
    /// Certificate that a finite table is not the restriction of any valuation.
    Certify {
        table: String,
        #[arg(long, default_value_t = 2)]
        prime: u64,
    },
    /// Run a seeded property suite.
    Suite {
        name: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Number of cases; each suite has its own default.
        #[arg(long)]
        cases: Option<usize>,
        /// Index of the first case.
        #[arg(long, default_value_t = 0)]
        start: usize,
        /// Chains each closedness certificate is tested against.
        #[arg(long, default_value_t = 50)]
        chains: usize,
    },
}

/// Text and JSON renderings of one result.
struct Output {
    text: String,
    json: Value,
    ok: bool,
}

impl Output {
    fn new(text: impl Into<String>, json: Value) -> Output {
        Output { text: text.into(), json, ok: true }
    }
}

fn parse_chain(s: &str) -> Result<ValuationChain, Error> {
    Ok(ValuationChain::parse(s)?)
}

fn chain_list(chains: &[ValuationChain]) -> Vec<String> {
    chains.iter().map(ToString::to_string).collect()
}

fn to_json(value: &impl Serialize) -> Value {
    serde_json::to_value(value).expect("reports serialize")
}

fn run(verb: Verb) -> Result<Output, Error> {
    match verb {
        Verb::Eval { chain, poly } => {
            let chain = parse_chain(&chain)?;
            let f = Poly::parse(&poly)?;
            let v = chain.evaluate(&f);
            Ok(Output::new(v.to_string(), json!({ "verb": "eval", "poly": f.to_string(), "value": v.to_string() })))
        }
        Verb::Compare { mu, nu } => {
            let (mu, nu) = (parse_chain(&mu)?, parse_chain(&nu)?);
            let c = compare(&mu, &nu)?;
            let show = |w: &Option<Poly>| w.as_ref().map(ToString::to_string);
            let mut text = c.verdict.to_string();
            if let Some(w) = &c.rises {
                text.push_str(&format!("\nrises at {w}"));
            }
            if let Some(w) = &c.drops {
                text.push_str(&format!("\ndrops at {w}"));
            }
            Ok(Output::new(
                text,
                json!({ "verb": "compare", "verdict": c.verdict, "rises": show(&c.rises), "drops": show(&c.drops) }),
            ))
        }
        Verb::Meet { mu, nu } => {
            let m = meet(&parse_chain(&mu)?, &parse_chain(&nu)?)?;
            Ok(Output::new(
                m.to_string(),
                json!({ "verb": "meet", "meet": m.to_string(), "classification": m.classify() }),
            ))
        }
        Verb::Between { mu, nu } => {
            let b = strict_between(&parse_chain(&mu)?, &parse_chain(&nu)?)?;
            let witnesses: Vec<String> = b.witnesses.iter().map(ToString::to_string).collect();
            Ok(Output::new(
                format!("{}\nwitnesses: {}", b.eta, witnesses.join(", ")),
                json!({ "verb": "between", "eta": b.eta.to_string(), "witnesses": witnesses }),
            ))
        }
        Verb::Classes { mu, sample } => {
            let mu = parse_chain(&mu)?;
            let sample = sample.iter().map(|s| parse_chain(s)).collect::<Result<Vec<_>, _>>()?;
            let part = classify_directions(&mu, &sample)?;
            let mut text = String::new();
            for (k, class) in part.classes.iter().enumerate() {
                let label = match (&part.tangents[k], part.below_class == Some(k)) {
                    (_, true) => "below".to_string(),
                    (Some(t), _) => format!("direction {t}"),
                    (None, _) => "direction".to_string(),
                };
                text.push_str(&format!("class {k} ({label}): {class:?}\n"));
            }
            for v in &part.violations {
                text.push_str(&format!("violation: {v}\n"));
            }
            let tangents: Vec<Option<String>> = part.tangents.iter().map(|t| t.as_ref().map(ToString::to_string)).collect();
            Ok(Output {
                text: text.trim_end().to_string(),
                json: json!({
                    "verb": "classes",
                    "classes": part.classes,
                    "below_class": part.below_class,
                    "tangents": tangents,
                    "violations": part.violations,
                    "sample": chain_list(&sample),
                }),
                ok: part.violations.is_empty(),
            })
        }
        Verb::Limit { family, cutoff } => {
            let fam = IncreasingFamily::parse(&family)?;
            let lim = supremum(&fam, cutoff)?;
            let (key, gamma) = match &lim {
                LimitValuation::Augmented { key, gamma, .. } => (Some(key.to_string()), Some(gamma.to_string())),
                LimitValuation::Stable { .. } => (None, None),
            };
            let chain = lim.as_chain().map(|c| c.to_string());
            let mut text = format!("{lim}\nclassification: {}", lim.classify());
            if let Some(c) = &chain {
                text.push_str(&format!("\nchain: {c}"));
            }
            Ok(Output::new(
                text,
                json!({
                    "verb": "limit",
                    "limit": lim.to_string(),
                    "key": key,
                    "gamma": gamma,
                    "classification": lim.classify(),
                    "chain": chain,
                }),
            ))
        }
        Verb::Certify { table, prime } => {
            let table = Table::parse(&table)?;
            match nonvaluation_certificate(prime, &table)? {
                Some(cert) => {
                    let holds = certificate_check(&cert, Subject::Table(&table))?;
                    let constraints: Vec<Value> = cert
                        .constraints
                        .iter()
                        .map(|(f, w)| json!({ "poly": f.to_string(), "window": w.to_string() }))
                        .collect();
                    Ok(Output {
                        text: format!("{cert}\ntable satisfies certificate: {holds}"),
                        json: json!({
                            "verb": "certify",
                            "certificate": cert.to_string(),
                            "axiom": cert.axiom,
                            "constraints": constraints,
                            "narrative": cert.narrative,
                            "table_satisfies": holds,
                        }),
                        ok: holds,
                    })
                }
                None => Ok(Output::new(
                    "no violation found",
                    json!({ "verb": "certify", "certificate": null }),
                )),
            }
        }
        Verb::Suite { name, seed, cases, start, chains } => {
            let report = run_suite(&name, &SuiteConfig { seed, start, cases, chains })?;
            Ok(Output {
                text: report.to_string().trim_end().to_string(),
                json: to_json(&report),
                ok: report.passed(),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.verb) {
        Ok(out) => {
            match cli.format {
                Format::Text => println!("{}", out.text),
                Format::Structured => println!("{}", out.json),
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            match cli.format {
                Format::Text => eprintln!("error: {e}"),
                Format::Structured => println!("{}", json!({ "error": e.to_string() })),
            }
            ExitCode::from(2)
        }
    }
}
