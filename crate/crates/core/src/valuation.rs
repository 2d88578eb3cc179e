//! Valuations on `Q[x]` presented as finite augmentation chains.
//!
//! A chain `[γ₀; (φ₁,γ₁), …, (φ_k,γ_k)]` over `(Q, v_p)` denotes the monomial
//! valuation `Σ a_j x^j ↦ min v_p(a_j) + jγ₀` augmented successively by
//! `f ↦ min μ(f_j) + jγ` along the `φ`-expansion `f = Σ f_j φ^j`.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gen::random_poly;
use crate::poly::{expand_unchecked, parse_poly, q_expansion, PAdic, Poly};
use crate::quasicut::sme_equivalent;
use crate::text::{parse_all, Cursor, PResult};
use crate::value::{parse_group_value, GroupValue, LexValue};

/// Anything that assigns values to polynomials: chains and limit valuations.
pub trait Evaluable {
    fn prime(&self) -> u64;
    fn try_eval(&self, f: &Poly) -> Result<GroupValue>;
}

#[derive(Clone, Debug, PartialEq)]
pub struct Step {
    pub key: Poly,
    pub value: GroupValue,
}

/// A finite augmentation chain. Equality ignores the validation stamp and
/// the declared rank (values are compared after zero-padding).
#[derive(Clone, Debug)]
pub struct ValuationChain {
    base: PAdic,
    rank: usize,
    root: LexValue,
    steps: Vec<Step>,
    validated: bool,
}

impl PartialEq for ValuationChain {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.root == other.root && self.steps == other.steps
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    NontrivialSupport,
    ResidueTranscendental,
    ValueTranscendental,
    ValuationAlgebraic,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::NontrivialSupport => "nontrivial_support",
            Classification::ResidueTranscendental => "residue_transcendental",
            Classification::ValueTranscendental => "value_transcendental",
            Classification::ValuationAlgebraic => "valuation_algebraic",
        })
    }
}

impl ValuationChain {
    /// The monomial valuation with `x ↦ γ₀`.
    pub fn monomial(p: u64, root: LexValue) -> Result<Self> {
        Ok(ValuationChain {
            base: PAdic::new(p)?,
            rank: root.rank(),
            root,
            steps: Vec::new(),
            validated: true,
        })
    }

    pub fn gauss(p: u64) -> Result<Self> {
        ValuationChain::monomial(p, LexValue::zero())
    }

    /// Builds a chain step by step through [`ValuationChain::augment`].
    pub fn from_steps(p: u64, rank: usize, root: LexValue, steps: Vec<(Poly, GroupValue)>) -> Result<Self> {
        let mut chain = ValuationChain::monomial(p, root)?;
        chain.rank = chain.rank.max(rank);
        for (key, value) in steps {
            chain = chain.augment(&key, &value)?;
        }
        Ok(chain)
    }

    pub fn prime(&self) -> u64 {
        self.base.prime()
    }

    pub fn base(&self) -> PAdic {
        self.base
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn root(&self) -> &LexValue {
        &self.root
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn depth(&self) -> usize {
        self.steps.len()
    }

    pub fn is_validated(&self) -> bool {
        self.validated
    }

    /// Same valuation with output padded to at least `rank` coordinates.
    pub fn with_rank(mut self, rank: usize) -> Self {
        self.rank = self.rank.max(rank);
        self
    }

    /// The chain with its last `n` steps removed; a valuation below `self`.
    pub fn truncated(&self, depth: usize) -> ValuationChain {
        let mut out = self.clone();
        out.steps.truncate(depth);
        out
    }

    /// Last key polynomial and its value (`x` and `γ₀` at depth 0).
    pub fn last_key(&self) -> (Poly, GroupValue) {
        match self.steps.last() {
            Some(s) => (s.key.clone(), s.value.clone()),
            None => (Poly::x(), GroupValue::Finite(self.root.clone())),
        }
    }

    pub fn evaluate(&self, f: &Poly) -> GroupValue {
        self.eval_at_depth(self.steps.len(), f).padded(self.rank)
    }

    fn eval_at_depth(&self, depth: usize, f: &Poly) -> GroupValue {
        if f.is_zero() {
            return GroupValue::Infinity;
        }
        if depth == 0 {
            let root = GroupValue::Finite(self.root.clone());
            return f
                .coeffs()
                .iter()
                .enumerate()
                .filter_map(|(j, a)| {
                    let order = self.base.order(a)?;
                    Some(&GroupValue::int(order) + &root.times(j))
                })
                .min()
                .unwrap_or(GroupValue::Infinity);
        }
        let step = &self.steps[depth - 1];
        if f.degree() < step.key.degree() {
            return self.eval_at_depth(depth - 1, f);
        }
        expand_unchecked(f, &step.key)
            .iter()
            .enumerate()
            .filter(|(_, fj)| !fj.is_zero())
            .map(|(j, fj)| &self.eval_at_depth(depth - 1, fj) + &step.value.times(j))
            .min()
            .unwrap_or(GroupValue::Infinity)
    }

    /// `min_j ν(f_j q^j)` over the `q`-expansion of `f`.
    pub fn truncation_value(&self, q: &Poly, f: &Poly) -> Result<GroupValue> {
        let expansion = q_expansion(f, q)?;
        Ok(expansion
            .iter()
            .enumerate()
            .map(|(j, fj)| self.evaluate(&(fj * &q.pow(j))))
            .min()
            .unwrap_or(GroupValue::Infinity))
    }

    /// `[μ; φ, γ]`. The result is unvalidated until [`ValuationChain::validate`] passes.
    pub fn augment(&self, phi: &Poly, gamma: &GroupValue) -> Result<ValuationChain> {
        if !phi.is_monic() || phi.is_constant() {
            return Err(Error::BadKey(phi.to_string()));
        }
        if let Some(last) = self.steps.last() {
            if last.value.is_infinite() {
                return Err(Error::Augmentation(format!(
                    "cannot augment past the infinite step at {}",
                    last.key
                )));
            }
            if phi.degree() < last.key.degree() {
                return Err(Error::Augmentation(format!(
                    "key degrees must be non-decreasing along a chain: deg {} < deg {}",
                    phi, last.key
                )));
            }
        }
        let current = self.evaluate(phi);
        if current >= *gamma {
            return Err(Error::Augmentation(format!(
                "need μ({phi}) = {current} < {gamma}"
            )));
        }
        let mut out = self.clone();
        out.rank = out.rank.max(gamma.rank());
        out.steps.push(Step {
            key: phi.clone(),
            value: gamma.clone(),
        });
        out.validated = false;
        Ok(out)
    }

    /// Checks the axioms on `samples` and stamps the chain on success.
    pub fn validate(mut self, samples: &[Poly]) -> Result<ValuationChain> {
        let report = check_axioms(&self, samples)?;
        match report.violation {
            None => {
                self.validated = true;
                Ok(self)
            }
            Some(v) => Err(Error::Augmentation(format!("axiom check failed: {v}"))),
        }
    }

    /// Validates on [`default_sample`].
    pub fn validate_default(self) -> Result<ValuationChain> {
        let sample = default_sample(&self, DEFAULT_RANDOM_SAMPLE, 0);
        self.validate(&sample)
    }

    /// Marks the chain valid without checking; for chains produced by
    /// constructions already known to yield key polynomials.
    pub(crate) fn assume_valid(mut self) -> ValuationChain {
        self.validated = true;
        self
    }

    pub fn support(&self) -> Option<Poly> {
        match self.steps.last() {
            Some(s) if s.value.is_infinite() => Some(s.key.clone()),
            _ => None,
        }
    }

    pub fn classify(&self) -> Classification {
        match self.last_key().1 {
            GroupValue::Infinity => Classification::NontrivialSupport,
            GroupValue::Finite(g) if g.in_divisible_hull() => Classification::ResidueTranscendental,
            GroupValue::Finite(_) => Classification::ValueTranscendental,
        }
    }

    pub fn degree_sv(&self) -> (usize, GroupValue) {
        let (key, value) = self.last_key();
        (key.degree().unwrap_or(0), value.padded(self.rank))
    }

    /// Drops steps whose value equals the value of their key under the
    /// preceding truncation; such steps do not change the valuation.
    pub fn normalized(&self) -> ValuationChain {
        let mut out = self.truncated(0);
        for step in &self.steps {
            if out.evaluate(&step.key) != step.value {
                out.steps.push(step.clone());
            }
        }
        out.rank = self.rank;
        out.validated = self.validated;
        out
    }

    /// Appends a step without any precondition check.
    pub fn push_step_unchecked(mut self, key: Poly, value: GroupValue) -> ValuationChain {
        self.rank = self.rank.max(value.rank());
        self.steps.push(Step { key, value });
        self.validated = false;
        self
    }

    pub fn parse(src: &str) -> PResult<ValuationChain> {
        parse_all(src, parse_chain)
    }
}

impl Evaluable for ValuationChain {
    fn prime(&self) -> u64 {
        self.base.prime()
    }

    fn try_eval(&self, f: &Poly) -> Result<GroupValue> {
        Ok(self.evaluate(f))
    }
}

impl fmt::Display for ValuationChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "val {{ p: {}, rank: {}, root: {}, steps: [",
            self.prime(),
            self.rank,
            self.root.padded(self.rank)
        )?;
        for (i, s) in self.steps.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, " ({}, {})", s.key, s.value.padded(self.rank))?;
        }
        if !self.steps.is_empty() {
            write!(f, " ")?;
        }
        write!(f, "] }}")
    }
}

pub(crate) fn parse_chain(cur: &mut Cursor<'_>) -> PResult<ValuationChain> {
    let start = cur.pos();
    cur.expect_keyword("val")?;
    cur.expect('{')?;
    let mut prime = None;
    let mut rank = None;
    let mut root = None;
    let mut steps: Vec<(usize, Poly, GroupValue)> = Vec::new();
    let mut first = true;
    while cur.peek() != Some('}') {
        if !first {
            cur.expect(',')?;
            if cur.peek() == Some('}') {
                break;
            }
        }
        first = false;
        cur.skip_ws();
        let at = cur.pos();
        let field = cur.ident()?;
        cur.expect(':')?;
        match field {
            "p" => {
                cur.skip_ws();
                let at = cur.pos();
                let p = cur.unsigned()?;
                prime = Some((at, u64::try_from(&p).map_err(|_| cur.error("prime out of range"))?));
            }
            "rank" => rank = Some(cur.usize()?),
            "root" => {
                cur.skip_ws();
                let at = cur.pos();
                match parse_group_value(cur)? {
                    GroupValue::Finite(v) => root = Some(v),
                    GroupValue::Infinity => {
                        return Err(crate::error::ParseError::new(at, "root value must be finite"))
                    }
                }
            }
            "steps" => {
                cur.expect('[')?;
                while cur.peek() != Some(']') {
                    if !steps.is_empty() {
                        cur.expect(',')?;
                    }
                    cur.skip_ws();
                    let at = cur.pos();
                    cur.expect('(')?;
                    let key = parse_poly(cur)?;
                    cur.expect(',')?;
                    let value = parse_group_value(cur)?;
                    cur.expect(')')?;
                    steps.push((at, key, value));
                }
                cur.expect(']')?;
            }
            other => {
                return Err(crate::error::ParseError::new(at, format!("unknown chain field '{other}'")))
            }
        }
    }
    cur.expect('}')?;
    let (p_at, p) = prime.ok_or_else(|| crate::error::ParseError::new(start, "chain is missing 'p'"))?;
    let root = root.ok_or_else(|| crate::error::ParseError::new(start, "chain is missing 'root'"))?;
    let mut chain = ValuationChain::monomial(p, root)
        .map_err(|e| crate::error::ParseError::new(p_at, e.to_string()))?;
    let declared = rank.unwrap_or(1);
    for (at, key, value) in steps {
        // A step that does not raise its key's value is the identity and is dropped.
        if !key.is_constant() && key.is_monic() && chain.evaluate(&key) == value {
            continue;
        }
        chain = chain
            .augment(&key, &value)
            .map_err(|e| crate::error::ParseError::new(at, e.to_string()))?;
    }
    if chain.rank > declared && rank.is_some() {
        return Err(crate::error::ParseError::new(
            start,
            format!("declared rank {declared} is below the rank {} of the values", chain.rank),
        ));
    }
    chain.rank = chain.rank.max(declared);
    chain.validated = false;
    Ok(chain)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Axiom {
    V1,
    V2,
    V3,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub pair: (Poly, Poly),
    pub detail: String,
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on ({}, {}): {}", self.axiom, self.pair.0, self.pair.1, self.detail)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AxiomReport {
    pub pairs_checked: usize,
    pub violation: Option<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// V3 directly, then V1 and V2 on every unordered pair of `samples`.
pub fn check_axioms(nu: &dyn Evaluable, samples: &[Poly]) -> Result<AxiomReport> {
    let one = nu.try_eval(&Poly::one())?;
    let zero = nu.try_eval(&Poly::zero())?;
    if one != GroupValue::zero() || zero != GroupValue::Infinity {
        return Ok(AxiomReport {
            pairs_checked: 0,
            violation: Some(AxiomViolation {
                axiom: Axiom::V3,
                pair: (Poly::one(), Poly::zero()),
                detail: format!("ν(1) = {one}, ν(0) = {zero}"),
            }),
        });
    }
    let values = samples.iter().map(|f| nu.try_eval(f)).collect::<Result<Vec<_>>>()?;
    let mut pairs = 0;
    for axiom in [Axiom::V1, Axiom::V2] {
        for i in 0..samples.len() {
            for j in i..samples.len() {
                let (f, g) = (&samples[i], &samples[j]);
                pairs += 1;
                let broken = match axiom {
                    Axiom::V1 => {
                        let lhs = nu.try_eval(&(f * g))?;
                        let rhs = &values[i] + &values[j];
                        (lhs != rhs).then(|| format!("ν(fg) = {lhs} but ν(f) + ν(g) = {rhs}"))
                    }
                    _ => {
                        let lhs = nu.try_eval(&(f + g))?;
                        let rhs = values[i].clone().min(values[j].clone());
                        (lhs < rhs).then(|| format!("ν(f+g) = {lhs} < min(ν(f), ν(g)) = {rhs}"))
                    }
                };
                if let Some(detail) = broken {
                    return Ok(AxiomReport {
                        pairs_checked: pairs,
                        violation: Some(AxiomViolation {
                            axiom,
                            pair: (f.clone(), g.clone()),
                            detail,
                        }),
                    });
                }
            }
        }
    }
    Ok(AxiomReport {
        pairs_checked: pairs,
        violation: None,
    })
}

pub const DEFAULT_RANDOM_SAMPLE: usize = 200;

/// Monomials up to `2·deg φ`, the chain's keys, and `random` seeded random
/// polynomials of degree at most `2·deg φ`.
pub fn default_sample(chain: &ValuationChain, random: usize, seed: u64) -> Vec<Poly> {
    let d = chain.degree_sv().0.max(1);
    let mut out: Vec<Poly> = (0..=2 * d).map(|k| Poly::x().pow(k)).collect();
    out.push(Poly::from_ints(&[chain.prime() as i64]));
    for s in chain.steps() {
        if !out.contains(&s.key) {
            out.push(s.key.clone());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    out.extend((0..random).map(|_| random_poly(&mut rng, 2 * d, chain.prime())));
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub equivalent: bool,
    pub sample_size: usize,
    pub reason: String,
}

/// Decides `μ ∼ ν` relative to `samples`: equal degree, a common key of
/// minimal degree, agreement below that degree, and `sv(μ) ∼sme sv(ν)`.
pub fn equivalence(mu: &ValuationChain, nu: &ValuationChain, samples: &[Poly]) -> Result<EquivalenceReport> {
    if mu.prime() != nu.prime() {
        return Err(Error::PrimeMismatch(mu.prime(), nu.prime()));
    }
    for c in [mu, nu] {
        if !c.is_validated() {
            return Err(Error::Precondition(format!("chain {c} has not been validated")));
        }
    }
    let report = |equivalent, reason: String| EquivalenceReport {
        equivalent,
        sample_size: samples.len(),
        reason,
    };
    let (dm, svm) = mu.degree_sv();
    let (dn, svn) = nu.degree_sv();
    if dm != dn {
        return Ok(report(false, format!("degrees differ: {dm} vs {dn}")));
    }
    let (km, _) = mu.last_key();
    let (kn, _) = nu.last_key();
    if km != kn && (mu.evaluate(&kn) != svm || nu.evaluate(&km) != svn) {
        return Ok(report(
            false,
            format!("no common key polynomial of degree {dm}: {km} and {kn}"),
        ));
    }
    for f in samples.iter().filter(|f| f.degree().is_some_and(|d| d < dm)) {
        let (a, b) = (mu.evaluate(f), nu.evaluate(f));
        if a != b {
            return Ok(report(false, format!("values differ below degree {dm} at {f}: {a} vs {b}")));
        }
    }
    if !sme_equivalent(&svm, &svn)? {
        return Ok(report(false, format!("sv values {svm} and {svn} define different cuts")));
    }
    Ok(report(true, format!("common key {km}, sv cuts agree")))
}

pub fn equivalent(mu: &ValuationChain, nu: &ValuationChain, samples: &[Poly]) -> Result<bool> {
    Ok(equivalence(mu, nu, samples)?.equivalent)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn p(s: &str) -> Poly {
        Poly::parse(s).unwrap()
    }

    pub fn v(s: &str) -> GroupValue {
        GroupValue::parse(s).unwrap()
    }

    pub fn gauss() -> ValuationChain {
        ValuationChain::gauss(2).unwrap()
    }

    pub fn chain(steps: &[(&str, &str)]) -> ValuationChain {
        ValuationChain::from_steps(
            2,
            1,
            LexValue::zero(),
            steps.iter().map(|(k, g)| (p(k), v(g))).collect(),
        )
        .unwrap()
        .assume_valid()
    }

    pub fn mu1() -> ValuationChain {
        chain(&[("x", "(1/2)")])
    }

    pub fn mu2() -> ValuationChain {
        chain(&[("x", "(1/2)"), ("x^2+2", "(3/2)")])
    }
}
