//! Seeded property suites. Case `k` draws from its own ChaCha stream `k`,
//! so any single case can be replayed with `--start k --cases 1`; shared
//! pools come from a separate stream of the same seed.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gen::{random_nonzero_poly, random_poly, ChainGenerator};
use crate::limits::{
    in_class, in_t_sme, limit_augment, net_limit_check, verify_supremum, IncreasingFamily,
    Subbasic, DEFAULT_CUTOFF,
};
use crate::poly::{base_val, Poly};
use crate::quasicut::{LimitDescriptor, SequenceRule};
use crate::topology::{
    certificate_check, density_witness, is_scott_open_finite, is_upper_set, nonvaluation_certificate,
    scott_weak_witness, spectrum_member, weak_class_in_sample, CertAxiom, Certificate, Density, FinitePoset,
    PosetOrder, Subject, Table, SCOTT_CAVEAT,
};
use crate::tree::{classify_directions, compare, le, meet, strict_between, verify_meet, Verdict};
use crate::valuation::{default_sample, Classification, ValuationChain};
use crate::value::{GroupValue, LexValue, Rational};

pub const SUITES: [&str; 8] = [
    "interval-triangle",
    "classes",
    "meets",
    "between",
    "limits",
    "closedness",
    "spectrum",
    "scott-weak",
];

pub const DEFAULT_SEED: u64 = 20240611;

const P: u64 = 2;
const POOL_SIZE: usize = 40;
const POOL_STREAM: u64 = u64::MAX;

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub start: usize,
    /// `None` selects the suite's default.
    pub cases: Option<usize>,
    /// Chains each closedness certificate is tested against.
    pub chains: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: DEFAULT_SEED,
            start: 0,
            cases: None,
            chains: 50,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub case: usize,
    pub detail: String,
    pub repro: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub start: usize,
    pub cases: usize,
    pub failures: Vec<Failure>,
    pub caveats: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl std::fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "suite {}: {} cases from {} (seed {}), {} failures",
            self.suite,
            self.cases,
            self.start,
            self.seed,
            self.failures.len()
        )?;
        for fail in &self.failures {
            writeln!(f, "  case {}: {}", fail.case, fail.detail)?;
            writeln!(f, "    reproduce: {}", fail.repro)?;
        }
        for c in &self.caveats {
            writeln!(f, "  note: {c}")?;
        }
        Ok(())
    }
}

pub fn default_cases(suite: &str) -> Option<usize> {
    Some(match suite {
        "interval-triangle" => 500,
        "classes" => 20,
        "meets" => 200,
        "between" => 200,
        "limits" => 100,
        "closedness" => 30,
        "spectrum" => 200,
        "scott-weak" => 100,
        _ => return None,
    })
}

/// Outcome of one case: `Err` carries the failure description.
type Case = std::result::Result<(), String>;

struct Ctx {
    generator: ChainGenerator,
    pool: Vec<ValuationChain>,
    chains: Vec<ValuationChain>,
}

fn case_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn fail<T>(e: Error) -> std::result::Result<T, String> {
    Err(e.to_string())
}

macro_rules! ensure {
    ($cond:expr, $($arg:tt)*) => {
        if !$cond {
            return Err(format!($($arg)*));
        }
    };
}

pub fn run_suite(name: &str, config: &SuiteConfig) -> Result<SuiteReport> {
    let cases = match (config.cases, default_cases(name)) {
        (_, None) => {
            return Err(Error::Precondition(format!(
                "unknown suite '{name}'; available suites: {}",
                SUITES.join(", ")
            )))
        }
        (Some(n), _) => n,
        (None, Some(n)) => n,
    };
    let generator = ChainGenerator::default();
    let mut shared = case_rng(config.seed, POOL_STREAM);
    let pool = generator.pool(&mut shared, POOL_SIZE);
    let chains = if name == "closedness" {
        (0..config.chains).map(|_| generator.chain(&mut shared)).collect()
    } else {
        Vec::new()
    };
    let ctx = Ctx { generator, pool, chains };
    let mut failures = Vec::new();
    for k in config.start..config.start + cases {
        let mut rng = case_rng(config.seed, k as u64);
        let outcome = match name {
            "interval-triangle" => triangle_case(&ctx, &mut rng),
            "classes" => classes_case(&ctx, &mut rng, k),
            "meets" => meets_case(&ctx, &mut rng),
            "between" => between_case(&ctx, &mut rng),
            "limits" => limits_case(&ctx, &mut rng, k),
            "closedness" => closedness_case(&ctx, &mut rng, k),
            "spectrum" => spectrum_case(&ctx, &mut rng),
            "scott-weak" => scott_weak_case(&ctx, &mut rng),
            _ => unreachable!("checked above"),
        };
        if let Err(detail) = outcome {
            failures.push(Failure {
                case: k,
                detail,
                repro: repro_command(name, config, k),
            });
        }
    }
    Ok(SuiteReport {
        suite: name.to_string(),
        seed: config.seed,
        start: config.start,
        cases,
        failures,
        caveats: caveats(name, config),
    })
}

fn repro_command(name: &str, config: &SuiteConfig, k: usize) -> String {
    let chains = if name == "closedness" {
        format!(" --chains {}", config.chains)
    } else {
        String::new()
    };
    format!("valtree suite {name} --seed {} --start {k} --cases 1{chains}", config.seed)
}

fn caveats(name: &str, config: &SuiteConfig) -> Vec<String> {
    let mut out = vec![format!("2-adic chains of depth at most 3; shared pool of {POOL_SIZE} chains")];
    match name {
        "classes" => out.push("classes are computed on sampled neighbourhoods of 5 to 7 chains".into()),
        "limits" => out.push(format!(
            "stability cutoff {DEFAULT_CUTOFF}; minimality is checked against candidates in T_sme only"
        )),
        "closedness" => out.push(format!("each certificate is tested against {} generated chains", config.chains)),
        "scott-weak" => out.push(SCOTT_CAVEAT.to_string()),
        _ => {}
    }
    out
}

fn pick<'a>(rng: &mut ChaCha8Rng, pool: &'a [ValuationChain]) -> &'a ValuationChain {
    pool.choose(rng).expect("pool is never empty")
}

/// A pair `μ < ν`, taken from the pool when possible, otherwise a chain and a truncation of it.
fn lt_pair(ctx: &Ctx, rng: &mut ChaCha8Rng) -> std::result::Result<(ValuationChain, ValuationChain), String> {
    for _ in 0..20 {
        let (a, b) = (pick(rng, &ctx.pool), pick(rng, &ctx.pool));
        match compare(a, b).or_else(fail)?.verdict {
            Verdict::Lt => return Ok((a.clone(), b.clone())),
            Verdict::Gt => return Ok((b.clone(), a.clone())),
            _ => {}
        }
    }
    loop {
        let nu = ctx.generator.chain(rng);
        if nu.depth() > 0 {
            let mu = nu.truncated(rng.gen_range(0..nu.depth()));
            return Ok((mu, nu));
        }
    }
}

/// `[μ, η] ⊆ [μ, ν] ∪ [ν, η]` on the pool and on derived points.
fn triangle_case(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Case {
    let (mu, nu, eta) = (pick(rng, &ctx.pool), pick(rng, &ctx.pool), pick(rng, &ctx.pool));
    let m_me = meet(mu, eta).or_else(fail)?;
    let m_mn = meet(mu, nu).or_else(fail)?;
    let m_ne = meet(nu, eta).or_else(fail)?;
    let inside = |rho: &ValuationChain, m: &ValuationChain, a: &ValuationChain, b: &ValuationChain| -> Result<bool> {
        Ok(le(m, rho)? && (le(rho, a)? || le(rho, b)?))
    };
    let mut sample: Vec<ValuationChain> = ctx.pool.clone();
    sample.extend([m_me.clone(), m_mn.clone(), m_ne.clone()]);
    for (a, b) in [(mu, eta), (&m_me, mu), (&m_me, eta)] {
        if let Ok(between) = strict_between(a, b) {
            sample.push(between.eta);
        }
    }
    for rho in &sample {
        if inside(rho, &m_me, mu, eta).or_else(fail)?
            && !(inside(rho, &m_mn, mu, nu).or_else(fail)? || inside(rho, &m_ne, nu, eta).or_else(fail)?)
        {
            return Err(format!("{rho} lies in [μ, η] but not in [μ, ν] ∪ [ν, η] for μ = {mu}, ν = {nu}, η = {eta}"));
        }
    }
    Ok(())
}

/// A chain of the requested kind: 0 any, 1 value-transcendental, 2 with an infinite step.
fn chain_of_kind(ctx: &Ctx, rng: &mut ChaCha8Rng, kind: usize) -> ValuationChain {
    for _ in 0..500 {
        let c = ctx.generator.chain(rng);
        let ok = match kind {
            1 => c.classify() == Classification::ValueTranscendental,
            2 => c.classify() == Classification::NontrivialSupport,
            _ => true,
        };
        if ok {
            return c;
        }
    }
    ctx.generator.chain(rng)
}

fn classes_case(ctx: &Ctx, rng: &mut ChaCha8Rng, k: usize) -> Case {
    let mu = chain_of_kind(ctx, rng, k % 3);
    let size = rng.gen_range(5..=7);
    let wide = ChainGenerator { max_depth: mu.depth() + 2 };
    let mut sample = Vec::new();
    if mu.depth() > 0 {
        sample.push(mu.truncated(rng.gen_range(0..mu.depth())));
    }
    if let Some(up) = wide.extend(rng, &mu) {
        sample.push(up);
    }
    for c in wide.neighbourhood(rng, &mu, size) {
        if sample.len() >= size {
            break;
        }
        if compare(&c, &mu).or_else(fail)?.verdict != Verdict::Eq
            && !sample.iter().any(|s| compare(s, &c).map(|x| x.verdict == Verdict::Eq).unwrap_or(false))
        {
            sample.push(c);
        }
    }
    let partition = classify_directions(&mu, &sample).or_else(fail)?;
    ensure!(partition.violations.is_empty(), "μ = {mu}: {}", partition.violations.join("; "));
    let above = sample.iter().filter(|s| le(&mu, *s).unwrap_or(false)).count();
    let below = sample.len() - above;
    match mu.classify() {
        Classification::ValueTranscendental if above > 0 && below > 0 => {
            ensure!(partition.classes.len() == 2, "value-transcendental μ = {mu} has {} classes", partition.classes.len())
        }
        Classification::NontrivialSupport => {
            ensure!(above == 0, "μ = {mu} has an infinite step but a sampled chain lies above it");
            ensure!(partition.classes.len() == 1, "μ = {mu} has an infinite step but {} classes", partition.classes.len())
        }
        _ => {}
    }
    Ok(())
}

fn meets_case(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Case {
    let (mu, nu) = (pick(rng, &ctx.pool), pick(rng, &ctx.pool));
    let m = meet(mu, nu).or_else(fail)?;
    let m2 = meet(nu, mu).or_else(fail)?;
    let eq = |a: &ValuationChain, b: &ValuationChain| -> std::result::Result<bool, String> {
        Ok(compare(a, b).or_else(fail)?.verdict == Verdict::Eq)
    };
    let ctx_str = format!("μ = {mu}, ν = {nu}, meet = {m}");
    ensure!(le(&m, mu).or_else(fail)? && le(&m, nu).or_else(fail)?, "meet is not a lower bound: {ctx_str}");
    ensure!(eq(&m, &m2)?, "meet is not commutative: {ctx_str}, reversed {m2}");
    ensure!(eq(&meet(mu, mu).or_else(fail)?, mu)?, "meet is not idempotent at {mu}");
    ensure!(eq(&m, mu)? == le(mu, nu).or_else(fail)?, "meet = μ disagrees with μ ≤ ν: {ctx_str}");
    let candidates: Vec<ValuationChain> = ctx.pool.choose_multiple(rng, 10).cloned().collect();
    ensure!(verify_meet(mu, nu, &m, &candidates).or_else(fail)?, "meet is not maximal: {ctx_str}");
    if compare(mu, nu).or_else(fail)?.verdict == Verdict::Incomparable {
        ensure!(
            m.classify() == Classification::ResidueTranscendental,
            "meet of incomparable chains is {}: {ctx_str}",
            m.classify()
        );
    }
    // Down-sets are totally ordered.
    if mu.depth() >= 1 {
        let a = mu.truncated(rng.gen_range(0..mu.depth()));
        let b = mu.truncated(rng.gen_range(0..=mu.depth()));
        let v = compare(&a, &b).or_else(fail)?.verdict;
        ensure!(v != Verdict::Incomparable, "truncations {a} and {b} of {mu} are incomparable");
    }
    Ok(())
}

fn between_case(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Case {
    let (mu, nu) = lt_pair(ctx, rng)?;
    let b = strict_between(&mu, &nu).or_else(fail)?;
    let eta = &b.eta;
    ensure!(
        compare(&mu, eta).or_else(fail)?.verdict == Verdict::Lt && compare(eta, &nu).or_else(fail)?.verdict == Verdict::Lt,
        "{eta} is not strictly between {mu} and {nu}"
    );
    // Pointwise check on a sample, independent of the structural comparison.
    for f in default_sample(&nu, 20, rng.gen()) {
        let (a, e, c) = (mu.evaluate(&f), eta.evaluate(&f), nu.evaluate(&f));
        ensure!(a <= e && e <= c, "values at {f} are not ordered: {a}, {e}, {c}");
    }
    ensure!(b.witnesses.len() == 2, "expected two strictness witnesses, got {}", b.witnesses.len());
    let (w1, w2) = (&b.witnesses[0], &b.witnesses[1]);
    ensure!(mu.evaluate(w1) < eta.evaluate(w1), "witness {w1} does not separate μ from η");
    ensure!(eta.evaluate(w2) < nu.evaluate(w2), "witness {w2} does not separate η from ν");
    Ok(())
}

/// The family `[Gauss; x, γ_i]` for a rule and limit descriptor.
pub fn gauss_family(rule: &str, limit: &str) -> Result<IncreasingFamily> {
    IncreasingFamily::parametric(
        ValuationChain::gauss(P)?,
        Poly::x(),
        SequenceRule::parse(rule)?,
        LimitDescriptor::parse(limit)?,
    )
}

fn limits_case(ctx: &Ctx, rng: &mut ChaCha8Rng, k: usize) -> Case {
    let unbounded = gauss_family("i", "inf").or_else(fail)?;
    let top = limit_augment(&unbounded, &Poly::x(), &GroupValue::Infinity, DEFAULT_CUTOFF).or_else(fail)?;
    let f = random_nonzero_poly(rng, 4, P);
    let expected = base_val(P, &f.coeff(0)).or_else(fail)?;
    let got = top.evaluate(&f).or_else(fail)?;
    ensure!(got == expected, "unbounded limit at {f} is {got}, expected v(f(0)) = {expected}");

    let bounded = gauss_family("1 - 1/2^i", "1-").or_else(fail)?;
    let gamma = GroupValue::from_ints(&[1, -1]);
    let limit = limit_augment(&bounded, &Poly::x(), &gamma, DEFAULT_CUTOFF).or_else(fail)?;
    let chain = limit.as_chain().ok_or("parametric limit has no chain form")?;
    ensure!(limit.evaluate(&Poly::x()).or_else(fail)? == gamma, "limit does not take γ at the key");

    // A random subbasic descriptor in T_sme with the limit in its class.
    let candidates: Vec<&ValuationChain> = ctx.pool.iter().filter(|c| in_t_sme(c)).collect();
    let mut descriptor = None;
    for _ in 0..50 {
        let mu = (*candidates.choose(rng).ok_or("no pool chain lies in T_sme")?).clone();
        if compare(&mu, &chain).or_else(fail)?.verdict != Verdict::Eq && in_class(&limit, &chain, &mu).or_else(fail)? {
            descriptor = Some(Subbasic { mu, nu: chain.clone() });
            break;
        }
    }
    let descriptor = descriptor.ok_or("no descriptor found with the limit in its class")?;
    let report = net_limit_check(&bounded, &limit, std::slice::from_ref(&descriptor)).or_else(fail)?;
    ensure!(report.all_finite(), "members never settle in the class at {}", descriptor.mu);

    if k.is_multiple_of(10) {
        let samples: Vec<Poly> = (0..30).map(|_| random_poly(rng, 3, P)).collect();
        let mut cands: Vec<ValuationChain> = candidates.iter().map(|c| (*c).clone()).collect();
        cands.push(chain.clone());
        let report = verify_supremum(&limit, &bounded, &cands, &samples, DEFAULT_CUTOFF).or_else(fail)?;
        ensure!(report.passed(), "supremum check failed: {:?}", report.failures);
        ensure!(report.q_variants_checked > 0, "no alternative limit key was checked");
    }
    Ok(())
}

/// A small positive or negative offset.
fn random_offset(rng: &mut ChaCha8Rng) -> LexValue {
    let n: i64 = *[-3, -2, -1, 1, 2, 3].choose(rng).unwrap();
    let d: i64 = *[1, 2, 4].choose(rng).unwrap();
    LexValue::rational(Rational::new(n.into(), d.into()))
}

fn corrupt(v: &GroupValue, rng: &mut ChaCha8Rng) -> GroupValue {
    match v {
        GroupValue::Finite(x) => GroupValue::Finite(x + &random_offset(rng)),
        GroupValue::Infinity => GroupValue::Finite(random_offset(rng)),
    }
}

/// Keeps the V1 and V2 branches clear of the restriction check on constants.
fn nonconstant(rng: &mut ChaCha8Rng) -> Poly {
    loop {
        let f = random_nonzero_poly(rng, 2, P);
        if !f.is_constant() {
            return f;
        }
    }
}

fn closedness_case(ctx: &Ctx, rng: &mut ChaCha8Rng, k: usize) -> Case {
    let source = ctx.generator.chain(rng);
    let a = nonconstant(rng);
    let b = nonconstant(rng);
    let mut table = Table::new();
    let intended = match k % 4 {
        0 => {
            table.insert(Poly::one(), GroupValue::Finite(random_offset(rng)));
            table.insert(a.clone(), source.evaluate(&a));
            CertAxiom::V3
        }
        1 => {
            let ab = &a * &b;
            table.insert(a.clone(), source.evaluate(&a));
            table.insert(b.clone(), source.evaluate(&b));
            table.insert(ab.clone(), corrupt(&source.evaluate(&ab), rng));
            CertAxiom::V1
        }
        2 => {
            let (a, b) = (a.clone(), &b + &Poly::x());
            let (va, vb) = (source.evaluate(&a), source.evaluate(&b));
            let m = va.clone().min(vb.clone());
            let low = match &m {
                GroupValue::Finite(x) => x - &LexValue::rational(Rational::new(rng.gen_range(1..4).into(), 2.into())),
                GroupValue::Infinity => LexValue::zero(),
            };
            table.insert(a.clone(), va);
            table.insert(b.clone(), vb);
            table.insert(&a + &b, GroupValue::Finite(low));
            CertAxiom::V2
        }
        _ => {
            let c = Poly::constant(Rational::from_integer(rng.gen_range(2..40).into()));
            let expected = base_val(P, &c.coeff(0)).or_else(fail)?;
            table.insert(c, corrupt(&expected, rng));
            CertAxiom::Restriction
        }
    };
    let cert = match nonvaluation_certificate(P, &table) {
        Ok(Some(c)) => c,
        Ok(None) => return Err(format!("no violation found in corrupted table {table}")),
        Err(e) => return Err(format!("table {table}: {e}")),
    };
    ensure!(
        cert.axiom == intended || intended == CertAxiom::V2,
        "table {table} corrupted for {intended} produced a {} certificate",
        cert.axiom
    );
    ensure!(cert.constraints.len() <= 3, "certificate {cert} has more than three constraints");
    ensure!(certificate_check(&cert, Subject::Table(&table)).or_else(fail)?, "table {table} violates its own certificate {cert}");
    ensure!(Certificate::parse(&cert.to_string()).ok().as_ref() == Some(&cert), "certificate text does not round-trip: {cert}");
    for chain in &ctx.chains {
        ensure!(
            !certificate_check(&cert, Subject::Valuation(chain)).or_else(fail)?,
            "valuation {chain} satisfies certificate {cert} of table {table}"
        );
    }
    Ok(())
}

fn spectrum_case(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Case {
    let nu = pick(rng, &ctx.pool);
    let f = random_poly(rng, 3, P);
    let g = random_poly(rng, 3, P);
    let (vf, vg) = (nu.evaluate(&f), nu.evaluate(&g));
    let expected = vg != GroupValue::Infinity && vf >= vg;
    ensure!(spectrum_member(nu, &f, &g).or_else(fail)? == expected, "membership of {nu} in U({f}, {g})");
    let g = random_nonzero_poly(rng, 3, P);
    let f = if rng.gen_bool(0.25) {
        g.scale(&crate::gen::random_rational(rng, P))
    } else {
        random_nonzero_poly(rng, 3, P)
    };
    if f.is_zero() {
        return Ok(());
    }
    match density_witness(P, &f, &g).or_else(fail)? {
        Density::Witnesses { value_transcendental, residue_transcendental, .. } => {
            ensure!(f.scalar_ratio(&g).is_none(), "{f} and {g} are proportional but witnesses were produced");
            for w in [&value_transcendental, &residue_transcendental] {
                let v = GroupValue::parse(&w.value_of_h).map_err(|e| e.to_string())?;
                ensure!(v >= GroupValue::zero(), "witness value {v} of h is negative");
            }
            ensure!(value_transcendental.classification == Classification::ValueTranscendental, "vt witness tag");
            ensure!(residue_transcendental.classification == Classification::ResidueTranscendental, "rt witness tag");
        }
        verdict => {
            let everything = matches!(verdict, Density::Everything { .. });
            // Every chain with ν(g) finite agrees with the degenerate verdict.
            if nu.evaluate(&g) != GroupValue::Infinity {
                ensure!(
                    spectrum_member(nu, &f, &g).or_else(fail)? == everything,
                    "degenerate verdict for {f} over {g} disagrees with {nu}"
                );
            }
        }
    }
    Ok(())
}

fn scott_weak_case(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Case {
    let (nu, mu) = lt_pair(ctx, rng)?;
    let mut sample: Vec<ValuationChain> = ctx.pool.choose_multiple(rng, 8).cloned().collect();
    sample.extend([mu.clone(), nu.clone()]);
    sample.extend(ChainGenerator { max_depth: mu.depth() + 2 }.neighbourhood(rng, &mu, 4));
    let report = scott_weak_witness(&mu, &nu, &sample).or_else(fail)?;
    ensure!(report.passed(), "witness failed for ν = {nu} < μ = {mu}: {report:?}");

    // Upper-set lemma on a small poset, exhaustively.
    let mut elements: Vec<ValuationChain> = Vec::new();
    for c in std::iter::once(mu.clone()).chain(ChainGenerator { max_depth: 3 }.neighbourhood(rng, &mu, 6)) {
        if elements.len() < 7 && !elements.iter().any(|e| compare(e, &c).map(|x| x.verdict == Verdict::Eq).unwrap_or(true)) {
            elements.push(c);
        }
    }
    let poset = FinitePoset::new(elements, vec!["neighbourhood".into()]).or_else(fail)?;
    for m in 0..poset.len() {
        for n in 0..poset.len() {
            if m == n {
                continue;
            }
            let class = weak_class_in_sample(&poset, m, n).or_else(fail)?;
            ensure!(
                is_upper_set(&poset, &class, PosetOrder::Rooted(m)).or_else(fail)?,
                "class of {} at {} is not an upper set for the rooted order",
                poset.elements[n],
                poset.elements[m]
            );
            let scott = is_scott_open_finite(&poset, &class, PosetOrder::Rooted(m)).or_else(fail)?;
            ensure!(scott.scott_open, "class is upper but not Scott open on a finite poset");
        }
    }
    Ok(())
}
