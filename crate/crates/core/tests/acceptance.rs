//! Acceptance checks, one line per criterion. Runs without the libtest
//! harness so the lines always appear in `cargo test` output.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num::{BigInt, Integer, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use valtree::gen::{random_neighbourhood, random_nonzero_poly, random_poly, random_value, sample_in, ChainGenerator};
use valtree::limits::{in_class, in_t_sme, limit_augment, net_limit_check, verify_supremum, Subbasic, DEFAULT_CUTOFF};
use valtree::suites::{gauss_family, run_suite, SuiteConfig};
use valtree::topology::{certificate_check, nonvaluation_certificate, Subject};
use valtree::tree::{classify_directions, le, verify_meet};
use valtree::valuation::equivalent;
use valtree::value::{separate, sum_preimage};
use valtree::{
    compare, meet, strict_between, Classification, GroupValue, Interval, Poly, Rational, Table,
    ValuationChain, Verdict,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Option<Duration>, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($arg:tt)*) => {
        if !$cond {
            return Err(format!($($arg)*));
        }
    };
}

fn chain(s: &str) -> ValuationChain {
    ValuationChain::parse(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn poly(s: &str) -> Poly {
    Poly::parse(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn value(s: &str) -> GroupValue {
    GroupValue::parse(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn gauss() -> ValuationChain {
    ValuationChain::gauss(2).expect("2 is prime")
}

const MU1: &str = "val { p: 2, root: (0), steps: [(x, (1/2))] }";
const MU2: &str = "val { p: 2, root: (0), steps: [(x, (1/2)), (x^2 + 2, (3/2))] }";

fn fixed_chains() -> Vec<ValuationChain> {
    [
        "val { p: 2, root: (0) }",
        MU1,
        MU2,
        "val { p: 2, root: (0), steps: [(x, (1/2)), (x^2 + 2, (3/2,1))] }",
        "val { p: 2, root: (0), steps: [(x + 1, inf)] }",
        "val { p: 2, root: (0), steps: [(x, (1))] }",
        "val { p: 2, root: (1/2) }",
        "val { p: 2, root: (0), steps: [(x, (1)), (x^2 + 2*x + 4, (5/2))] }",
        "val { p: 2, rank: 2, root: (0,0), steps: [(x, (1,1))] }",
        "val { p: 2, root: (0), steps: [(x, (1/2)), (x^2 + 2, inf)] }",
    ]
    .iter()
    .map(|s| chain(s))
    .collect()
}

fn axioms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let chains = fixed_chains();
    for c in &chains {
        ensure!(c.evaluate(&Poly::one()) == GroupValue::zero(), "{c}: value of 1");
        ensure!(c.evaluate(&Poly::zero()) == GroupValue::Infinity, "{c}: value of 0");
        for _ in 0..1000 {
            let f = random_poly(&mut rng, 5, 2);
            let g = random_poly(&mut rng, 5, 2);
            let (vf, vg) = (c.evaluate(&f), c.evaluate(&g));
            ensure!(c.evaluate(&(&f * &g)) == &vf + &vg, "V1 fails for {c} at ({f}, {g})");
            ensure!(c.evaluate(&(&f + &g)) >= vf.clone().min(vg), "V2 fails for {c} at ({f}, {g})");
        }
    }
    Ok(format!("{} chains x 1000 pairs", chains.len()))
}

/// 2-adic order of a nonzero rational, by repeated halving.
fn v2(q: &Rational) -> i64 {
    let count = |n: &BigInt| {
        let mut n = n.abs();
        let mut k = 0;
        let two = BigInt::from(2);
        while n.is_even() && !n.is_zero() {
            n /= &two;
            k += 1;
        }
        k
    };
    count(q.numer()) - count(q.denom())
}

/// Independent evaluation of a chain of the form `[monomial(γ₀); φ₁, γ₁; …]`
/// with rational values: remainders by schoolbook division, recursion on the
/// prefix chain.
fn oracle_eval(root: &Rational, steps: &[(Vec<Rational>, Rational)], f: &[Rational]) -> Option<Rational> {
    let trimmed: Vec<Rational> = {
        let mut v = f.to_vec();
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        v
    };
    if trimmed.is_empty() {
        return None;
    }
    let Some(((phi, gamma), prefix)) = steps.split_last() else {
        return trimmed
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| Rational::from_integer(v2(c).into()) + root * Rational::from_integer((i as i64).into()))
            .min();
    };
    let mut rest = trimmed;
    let mut best: Option<Rational> = None;
    let mut j = 0i64;
    while !rest.is_empty() {
        let (q, r) = divide_monic(&rest, phi);
        if let Some(vr) = oracle_eval(root, prefix, &r) {
            let term = vr + gamma * Rational::from_integer(j.into());
            best = Some(best.map_or(term.clone(), |b: Rational| b.min(term)));
        }
        rest = q;
        j += 1;
    }
    best
}

fn divide_monic(f: &[Rational], d: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let n = d.len() - 1;
    if f.len() <= n {
        return (Vec::new(), f.to_vec());
    }
    let mut r = f.to_vec();
    let mut q = vec![Rational::zero(); f.len() - n];
    for k in (0..q.len()).rev() {
        let c = r[k + n].clone();
        q[k] = c.clone();
        for (i, di) in d.iter().enumerate() {
            r[k + i] -= &c * di;
        }
    }
    r.truncate(n);
    while q.last().is_some_and(|c| c.is_zero()) {
        q.pop();
    }
    (q, r)
}

fn ints(c: &[i64]) -> Vec<Rational> {
    c.iter().map(|&n| Rational::from_integer(n.into())).collect()
}

fn worked_values() -> Outcome {
    let r = |n: i64, d: i64| Rational::new(n.into(), d.into());
    let zero = r(0, 1);
    let mu1_steps = vec![(ints(&[0, 1]), r(1, 2))];
    let mu2_steps = vec![(ints(&[0, 1]), r(1, 2)), (ints(&[2, 0, 1]), r(3, 2))];
    let cases = [
        (MU2, "x^3 + 2*x", oracle_eval(&zero, &mu2_steps, &ints(&[0, 2, 0, 1])), "(2)"),
        (MU1, "x^2 + 2", oracle_eval(&zero, &mu1_steps, &ints(&[2, 0, 1])), "(1)"),
        ("val { p: 2, root: (0) }", "2*x^2 + 3*x + 4", oracle_eval(&zero, &[], &ints(&[4, 3, 2])), "(0)"),
    ];
    for (c, f, oracle, expected) in cases {
        let got = chain(c).evaluate(&poly(f));
        let oracle = GroupValue::rational(oracle.ok_or("oracle returned infinity")?);
        ensure!(oracle == value(expected), "oracle gives {oracle} for {f}, expected {expected}");
        ensure!(got == oracle, "{c} at {f}: {got}, oracle {oracle}");
    }
    Ok("3 values match the expansion oracle".into())
}

fn suite(name: &str, cases: usize, chains: usize) -> Outcome {
    let config = SuiteConfig { cases: Some(cases), chains, ..SuiteConfig::default() };
    let report = run_suite(name, &config).map_err(err)?;
    ensure!(report.passed(), "{report}");
    Ok(format!("{} cases, 0 failures", report.cases))
}

fn pool(seed: u64, size: usize) -> (ChaCha8Rng, Vec<ValuationChain>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = ChainGenerator::default().pool(&mut rng, size);
    (rng, pool)
}

fn same(a: &ValuationChain, b: &ValuationChain) -> Result<bool, String> {
    Ok(compare(a, b).map_err(err)?.verdict == Verdict::Eq)
}

fn meets() -> Outcome {
    let (mut rng, pool) = pool(4, 40);
    let mut incomparable = 0;
    for _ in 0..200 {
        let (a, b) = (pool.choose(&mut rng).unwrap(), pool.choose(&mut rng).unwrap());
        let m = meet(a, b).map_err(err)?;
        ensure!(le(&m, a).map_err(err)? && le(&m, b).map_err(err)?, "meet({a}, {b}) = {m} is not below both");
        ensure!(same(&meet(a, a).map_err(err)?, a)?, "meet is not idempotent at {a}");
        ensure!(same(&m, &meet(b, a).map_err(err)?)?, "meet is not commutative at ({a}, {b})");
        ensure!(verify_meet(a, b, &m, &pool).map_err(err)?, "meet({a}, {b}) = {m} is not maximal in the pool");
        if compare(a, b).map_err(err)?.verdict == Verdict::Incomparable {
            incomparable += 1;
            ensure!(
                m.classify() == Classification::ResidueTranscendental,
                "meet of incomparable {a} and {b} is {}",
                m.classify()
            );
        }
    }
    ensure!(incomparable > 0, "no incomparable pair was drawn");
    Ok(format!("200 pairs, {incomparable} incomparable"))
}

fn partitions() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let generator = ChainGenerator::default();
    let (mut vt, mut inf) = (0, 0);
    for k in 0..20 {
        let want = [None, Some(Classification::ValueTranscendental), Some(Classification::NontrivialSupport)][k % 3];
        let mu = loop {
            let c = generator.chain(&mut rng);
            if want.is_none_or(|w| c.classify() == w) && c.depth() > 0 {
                break c;
            }
        };
        let wide = ChainGenerator { max_depth: mu.depth() + 2 };
        let size = rng.gen_range(5..=7);
        let mut sample = vec![mu.truncated(rng.gen_range(0..mu.depth()))];
        if let Some(up) = wide.extend(&mut rng, &mu) {
            sample.push(up);
        }
        for c in wide.neighbourhood(&mut rng, &mu, 12) {
            if sample.len() < size && !sample.iter().any(|s| same(s, &c).unwrap_or(true)) && !same(&c, &mu)? {
                sample.push(c);
            }
        }
        ensure!((5..=7).contains(&sample.len()), "sample of {} elements", sample.len());
        let part = classify_directions(&mu, &sample).map_err(err)?;
        ensure!(part.violations.is_empty(), "μ = {mu}: {:?}", part.violations);
        let not_above: Vec<usize> = (0..sample.len()).filter(|&i| !le(&mu, &sample[i]).unwrap_or(false)).collect();
        let holding = part.classes.iter().filter(|c| c.iter().any(|i| not_above.contains(i))).count();
        ensure!(holding == 1, "elements not above {mu} are spread over {holding} classes");
        match mu.classify() {
            Classification::ValueTranscendental => {
                vt += 1;
                ensure!(part.classes.len() == 2, "value-transcendental {mu}: {} classes", part.classes.len());
            }
            Classification::NontrivialSupport => {
                inf += 1;
                ensure!(part.classes.len() == 1, "{mu} with an infinite step: {} classes", part.classes.len());
            }
            _ => {}
        }
    }
    Ok(format!("20 subtrees, {vt} value-transcendental, {inf} with an infinite step"))
}

fn betweenness() -> Outcome {
    let (mut rng, pool) = pool(6, 40);
    let mut found = 0;
    while found < 200 {
        let (a, b) = (pool.choose(&mut rng).unwrap(), pool.choose(&mut rng).unwrap());
        if compare(a, b).map_err(err)?.verdict != Verdict::Lt {
            continue;
        }
        found += 1;
        let eta = strict_between(a, b).map_err(err)?.eta;
        ensure!(compare(a, &eta).map_err(err)?.verdict == Verdict::Lt, "{a} is not below {eta}");
        ensure!(compare(&eta, b).map_err(err)?.verdict == Verdict::Lt, "{eta} is not below {b}");
    }
    Ok("200 lt-pairs".into())
}

fn limits() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let unbounded = gauss_family("i", "inf").map_err(err)?;
    let top = limit_augment(&unbounded, &Poly::x(), &GroupValue::Infinity, DEFAULT_CUTOFF).map_err(err)?;
    for _ in 0..100 {
        let f = random_nonzero_poly(&mut rng, 4, 2);
        let c0 = f.coeff(0);
        let expected = if c0.is_zero() {
            GroupValue::Infinity
        } else {
            GroupValue::int(v2(&c0))
        };
        let got = top.evaluate(&f).map_err(err)?;
        ensure!(got == expected, "limit at {f} is {got}, v2(f(0)) = {expected}");
    }

    let bounded = gauss_family("1 - 1/2^i", "1-").map_err(err)?;
    let limit = limit_augment(&bounded, &Poly::x(), &value("(1,-1)"), DEFAULT_CUTOFF).map_err(err)?;
    let lchain = limit.as_chain().ok_or("no chain form")?;
    let samples: Vec<Poly> = (0..60).map(|_| random_poly(&mut rng, 4, 2)).collect();
    let candidates = vec![chain("val { p: 2, root: (0), steps: [(x, (1))] }")];
    let report = verify_supremum(&limit, &bounded, &candidates, &samples, DEFAULT_CUTOFF).map_err(err)?;
    ensure!(report.upper_bound, "upper bound check failed: {:?}", report.failures);
    ensure!(report.q_independent && report.q_variants_checked > 0, "Q-independence failed: {:?}", report.failures);

    let descriptors: Vec<Subbasic> = [
        MU1,
        "val { p: 2, root: (0) }",
        "val { p: 2, root: (0), steps: [(x + 1, (1))] }",
        "val { p: 2, root: (0), steps: [(x, (1/4))] }",
        "val { p: 2, root: (0), steps: [(x, (3/4))] }",
        "val { p: 2, root: (0), steps: [(x, (1))] }",
        "val { p: 2, root: (0), steps: [(x, (2))] }",
        "val { p: 2, root: (0), steps: [(x + 1, (1/2))] }",
        "val { p: 2, rank: 2, root: (0,0), steps: [(x, (1/2,1))] }",
        "val { p: 2, rank: 2, root: (0,0), steps: [(x, (1,1))] }",
    ]
    .iter()
    .map(|s| Subbasic { mu: chain(s), nu: lchain.clone() })
    .collect();
    for d in &descriptors {
        ensure!(in_t_sme(&d.mu), "{} is outside T_sme", d.mu);
        ensure!(in_class(&limit, &d.nu, &d.mu).map_err(err)?, "limit is not in the class at {}", d.mu);
    }
    let net = net_limit_check(&bounded, &limit, &descriptors).map_err(err)?;
    ensure!(net.all_finite(), "thresholds {:?}", net.thresholds);
    Ok(format!("100 constant-term values; thresholds {:?}", net.thresholds))
}

fn sme_equivalence() -> Outcome {
    let bounded = gauss_family("1 - 1/2^i", "1-").map_err(err)?;
    let build = |g: &str| -> Result<ValuationChain, String> {
        limit_augment(&bounded, &Poly::x(), &value(g), DEFAULT_CUTOFF)
            .map_err(err)?
            .as_chain()
            .ok_or_else(|| "no chain form".to_string())
    };
    let (a, b) = (build("(1,-1)")?, build("(1,-7)")?);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let sample: Vec<Poly> = (0..200).map(|_| random_poly(&mut rng, 4, 2)).collect();
    ensure!(equivalent(&a, &b, &sample).map_err(err)?, "{a} and {b} are not equivalent");
    ensure!(compare(&a, &b).map_err(err)?.verdict != Verdict::Eq, "the two limits coincide as valuations");
    Ok("equivalent on 200 polynomials".into())
}

fn closedness() -> Outcome {
    let table = Table::parse("tab { (x) = (1); (x^2) = (3) }").map_err(err)?;
    let cert = nonvaluation_certificate(2, &table).map_err(err)?.ok_or("no certificate")?;
    let expected: Vec<(Poly, Interval)> = [("x", "open((3/4), (5/4))"), ("x", "open((3/4), (5/4))"), ("x^2", "open((11/4), (13/4))")]
        .iter()
        .map(|(f, w)| (poly(f), Interval::parse(w).unwrap()))
        .collect();
    ensure!(cert.constraints == expected, "worked certificate {cert}");
    ensure!(!certificate_check(&cert, Subject::Valuation(&gauss())).map_err(err)?, "Gauss satisfies {cert}");
    suite("closedness", 30, 50)
}

fn order_witnesses() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut infinite = 0;
    for _ in 0..1000 {
        let a = random_value(&mut rng);
        let b = if rng.gen_range(0..5) == 0 { GroupValue::Infinity } else { random_value(&mut rng) };
        if a < b {
            let (u, w) = separate(&a, &b).map_err(err)?;
            ensure!(u.contains(&a) && w.contains(&b), "separate({a}, {b}) misses an endpoint");
            infinite += b.is_infinite() as usize;
            for _ in 0..8 {
                if let (Some(x), Some(y)) = (sample_in(&mut rng, &u), sample_in(&mut rng, &w)) {
                    ensure!(x < y, "separate({a}, {b}): {x} in {u} is not below {y} in {w}");
                }
            }
        }
        let target = random_neighbourhood(&mut rng, &(&a + &b));
        let (v, w) = sum_preimage(&a, &b, &target).map_err(err)?;
        ensure!(v.contains(&a) && w.contains(&b), "sum_preimage({a}, {b}, {target}) misses a summand");
        infinite += (a.is_infinite() || b.is_infinite()) as usize;
        for _ in 0..8 {
            if let (Some(x), Some(y)) = (sample_in(&mut rng, &v), sample_in(&mut rng, &w)) {
                ensure!(target.contains(&(&x + &y)), "{x} + {y} leaves {target}");
            }
        }
    }
    ensure!(infinite > 0, "no infinite branch was exercised");
    Ok(format!("1000 calls each, {infinite} through the infinite branches"))
}

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        ("axiom suite", Some(Duration::from_secs(5)), axioms),
        ("worked values", None, worked_values),
        ("interval triangle", Some(Duration::from_secs(10)), || suite("interval-triangle", 500, 50)),
        ("meet laws", None, meets),
        ("direction partition", None, partitions),
        ("dense betweenness", None, betweenness),
        ("limit suite", None, limits),
        ("sme-equivalence", None, sme_equivalence),
        ("closedness", Some(Duration::from_secs(10)), closedness),
        ("order-topology witnesses", None, order_witnesses),
        ("Scott/weak witnesses", None, || suite("scott-weak", 100, 50)),
    ];
    let mut failed = 0;
    for (i, (name, bound, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let timing = match bound {
            Some(b) => format!("{:.2}s of {}s", elapsed.as_secs_f64(), b.as_secs()),
            None => format!("{:.2}s", elapsed.as_secs_f64()),
        };
        let verdict = match (&outcome, bound) {
            (Ok(_), Some(b)) if elapsed > b => Err(format!("time bound exceeded ({timing})")),
            (Ok(detail), _) => Ok(detail.clone()),
            (Err(e), _) => Err(e.clone()),
        };
        match verdict {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{timing}]", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {e} [{timing}]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
