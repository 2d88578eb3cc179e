//! Increasing families of valuations and their suprema.
//!
//! A family is either parametric, `ν_i = [base; key, γ_i]` for a symbolic
//! rational sequence `γ_i`, or an explicit finite list of chains. Every
//! polynomial is either stable (its values are eventually constant) or its
//! values increase strictly. If some polynomial is unstable, a monic unstable
//! `Q` of least degree gives the limit `μ_{Q,γ}(f) = min 𝔳(f_j) + jγ` over the
//! `Q`-expansion, with `γ` the canonical representative of the supremum cut
//! of `ν_i(Q)`; otherwise the limit is `f ↦` stable value.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{expand_unchecked, parse_poly, Poly};
use crate::quasicut::{
    qc_of_value, qc_representative, qc_sup, LimitDescriptor, QuasiCut, RationalSequence, SequenceRule,
    SequenceTerms,
};
use crate::text::{parse_all, Cursor, PResult};
use crate::tree::{compare, le, meet_with, Verdict};
use crate::valuation::{parse_chain, Classification, Evaluable, ValuationChain};
use crate::value::{GroupValue, Rational};

/// Members of a parametric family inspected when a finite prefix is needed.
pub const PREFIX_PROBE: usize = 12;

/// Default cutoff for stability decisions on explicit families.
pub const DEFAULT_CUTOFF: usize = 64;

/// Upper bound on indices scanned when locating where a value stabilizes.
const SCAN_LIMIT: usize = 512;

#[derive(Clone, Debug, PartialEq)]
pub enum IncreasingFamily {
    Parametric {
        base: ValuationChain,
        key: Poly,
        gamma: SequenceRule,
        limit: LimitDescriptor,
    },
    Explicit {
        members: Vec<ValuationChain>,
        /// The last member repeats forever.
        tail: bool,
        /// Declared behaviour of `ν_i(Q)` for the limit key polynomial.
        limit: Option<LimitDescriptor>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Stability {
    /// Constant from `index` on (`None` when the index lies beyond the scan limit).
    Stable { value: GroupValue, index: Option<usize> },
    /// `ν_i(f) < ν_j(f)` with `i < j`.
    Unstable { i: usize, j: usize, vi: GroupValue, vj: GroupValue },
    Undetermined,
}

impl Stability {
    pub fn is_stable(&self) -> bool {
        matches!(self, Stability::Stable { .. })
    }

    pub fn is_unstable(&self) -> bool {
        matches!(self, Stability::Unstable { .. })
    }
}

impl fmt::Display for Stability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stability::Stable { value, index: Some(i) } => write!(f, "stable at {value} from member {i}"),
            Stability::Stable { value, index: None } => write!(f, "stable at {value}"),
            Stability::Unstable { i, j, vi, vj } => write!(f, "unstable: member {i} gives {vi}, member {j} gives {vj}"),
            Stability::Undetermined => write!(f, "undetermined at the cutoff"),
        }
    }
}

fn first(g: &GroupValue) -> Option<&Rational> {
    g.finite().map(|v| v.first())
}

impl IncreasingFamily {
    /// `ν_i = [base; key, γ_i]`; member `0` may coincide with `base` when `γ_0 = base(key)`.
    pub fn parametric(base: ValuationChain, key: Poly, gamma: SequenceRule, limit: LimitDescriptor) -> Result<Self> {
        match &limit {
            LimitDescriptor::Irrational => {
                return Err(Error::UnsupportedLimit(format!("rule {} has an irrational limit", gamma.source())))
            }
            LimitDescriptor::Attained(q) => {
                return Err(Error::Family(format!(
                    "a parametric family has no maximum, so its limit {q} cannot be attained"
                )))
            }
            _ => {}
        }
        if !key.is_monic() || key.is_constant() {
            return Err(Error::BadKey(key.to_string()));
        }
        RationalSequence::rule(gamma.clone(), limit.clone()).check()?;
        let terms = (0..PREFIX_PROBE).map(|i| gamma.term(i)).collect::<Result<Vec<_>>>()?;
        if terms.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Family(format!("rule {} is not strictly increasing", gamma.source())));
        }
        let fam = IncreasingFamily::Parametric { base, key, gamma, limit };
        for i in 0..2 {
            fam.member(i)?;
        }
        Ok(fam)
    }

    /// Strictly increasing list of chains.
    pub fn explicit(members: Vec<ValuationChain>, tail: bool, limit: Option<LimitDescriptor>) -> Result<Self> {
        if members.len() < 2 {
            return Err(Error::Family("an explicit family needs at least two members".into()));
        }
        for (i, w) in members.windows(2).enumerate() {
            let c = compare(&w[0], &w[1])?;
            if c.verdict != Verdict::Lt {
                return Err(Error::Family(format!(
                    "members {i} and {} are not strictly increasing ({})",
                    i + 1,
                    c.verdict
                )));
            }
        }
        Ok(IncreasingFamily::Explicit { members, tail, limit })
    }

    pub fn prime(&self) -> u64 {
        match self {
            IncreasingFamily::Parametric { base, .. } => base.prime(),
            IncreasingFamily::Explicit { members, .. } => members[0].prime(),
        }
    }

    /// `γ_i` of a parametric family.
    pub fn gamma(&self, i: usize) -> Result<GroupValue> {
        match self {
            IncreasingFamily::Parametric { gamma, .. } => Ok(GroupValue::rational(gamma.term(i)?)),
            IncreasingFamily::Explicit { .. } => Err(Error::Family("explicit families have no γ rule".into())),
        }
    }

    pub fn member(&self, i: usize) -> Result<ValuationChain> {
        match self {
            IncreasingFamily::Parametric { base, key, gamma, .. } => {
                let g = GroupValue::rational(gamma.term(i)?);
                let current = base.evaluate(key);
                if g == current && i == 0 {
                    return Ok(base.clone());
                }
                if g <= current {
                    return Err(Error::Family(format!(
                        "γ_{i} = {g} does not exceed base({key}) = {current}"
                    )));
                }
                let m = base.augment(key, &g)?;
                Ok(if base.is_validated() { m.assume_valid() } else { m })
            }
            IncreasingFamily::Explicit { members, tail, .. } => match members.get(i) {
                Some(m) => Ok(m.clone()),
                None if *tail => Ok(members.last().unwrap().clone()),
                None => Err(Error::Family(format!("explicit family has no member {i}"))),
            },
        }
    }

    /// Members inspected for finite checks.
    pub fn prefix(&self) -> Result<Vec<ValuationChain>> {
        match self {
            IncreasingFamily::Parametric { .. } => (0..PREFIX_PROBE).map(|i| self.member(i)).collect(),
            IncreasingFamily::Explicit { members, .. } => Ok(members.clone()),
        }
    }

    fn expansion_values(&self, f: &Poly) -> Option<Vec<GroupValue>> {
        match self {
            IncreasingFamily::Parametric { base, key, .. } => {
                Some(expand_unchecked(f, key).iter().map(|fj| base.evaluate(fj)).collect())
            }
            IncreasingFamily::Explicit { .. } => None,
        }
    }

    /// Decides whether `ν_i(f)` is eventually constant.
    ///
    /// Parametric families are decided exactly from the fixed values `c_j`
    /// of the key-expansion coefficients: `ν_i(f) = min(c_0, min_{j≥1} c_j + jγ_i)`.
    /// Explicit families certify strict growth inside the first `cutoff`
    /// members, and stability only through a declared tail.
    pub fn is_stable(&self, f: &Poly, cutoff: usize) -> Result<Stability> {
        if cutoff < 2 {
            return Err(Error::Precondition("stability cutoff must be at least 2".into()));
        }
        match self {
            IncreasingFamily::Parametric { limit, .. } => {
                let c = self.expansion_values(f).unwrap();
                let growing: Vec<(usize, &GroupValue)> =
                    c.iter().enumerate().skip(1).filter(|(_, v)| !v.is_infinite()).collect();
                let stable = if growing.is_empty() {
                    true
                } else {
                    match (limit, first(&c[0])) {
                        (_, None) => false,
                        (LimitDescriptor::Unbounded, Some(_)) => true,
                        (LimitDescriptor::Approaches(q), Some(c0)) => {
                            let bound = growing
                                .iter()
                                .map(|(j, v)| first(v).unwrap() + q * Rational::from_integer((*j).into()))
                                .min()
                                .unwrap();
                            c0 < &bound
                        }
                        _ => unreachable!("rejected at construction"),
                    }
                };
                if stable {
                    let value = c[0].clone().min(
                        growing
                            .iter()
                            .map(|(_, v)| (*v).clone())
                            .min()
                            .unwrap_or(GroupValue::Infinity)
                            .max(c[0].clone()),
                    );
                    let value = if growing.is_empty() { c[0].clone() } else { value };
                    let mut index = None;
                    for i in 0..SCAN_LIMIT {
                        if self.member(i)?.evaluate(f) == value {
                            index = Some(i);
                            break;
                        }
                    }
                    Ok(Stability::Stable { value, index })
                } else {
                    let mut prev = self.member(0)?.evaluate(f);
                    for i in 0..SCAN_LIMIT {
                        let next = self.member(i + 1)?.evaluate(f);
                        if prev < next {
                            return Ok(Stability::Unstable { i, j: i + 1, vi: prev, vj: next });
                        }
                        prev = next;
                    }
                    Ok(Stability::Undetermined)
                }
            }
            IncreasingFamily::Explicit { members, tail, .. } => {
                let n = members.len().min(cutoff);
                let values: Vec<GroupValue> = members[..n].iter().map(|m| m.evaluate(f)).collect();
                if *tail && n == members.len() {
                    let value = values[n - 1].clone();
                    let index = (0..n).find(|&i| values[i..].iter().all(|v| *v == value));
                    return Ok(Stability::Stable { value, index });
                }
                if values[n - 2] < values[n - 1] {
                    return Ok(Stability::Unstable {
                        i: n - 2,
                        j: n - 1,
                        vi: values[n - 2].clone(),
                        vj: values[n - 1].clone(),
                    });
                }
                Ok(Stability::Undetermined)
            }
        }
    }

    pub fn parse(src: &str) -> PResult<IncreasingFamily> {
        parse_all(src, parse_family)
    }
}

impl fmt::Display for IncreasingFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IncreasingFamily::Parametric { base, key, gamma, limit } => write!(
                f,
                "fam {{ base: {base}, key: {key}, gamma: \"{}\", limit: \"{limit}\" }}",
                gamma.source()
            ),
            IncreasingFamily::Explicit { members, tail, limit } => {
                write!(f, "fam {{ explicit: [")?;
                for (i, m) in members.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, " {m}")?;
                }
                write!(f, " ]")?;
                if *tail {
                    write!(f, ", tail: true")?;
                }
                if let Some(l) = limit {
                    write!(f, ", limit: \"{l}\"")?;
                }
                write!(f, " }}")
            }
        }
    }
}

fn parse_family(cur: &mut Cursor<'_>) -> PResult<IncreasingFamily> {
    cur.skip_ws();
    let start = cur.pos();
    cur.expect_keyword("fam")?;
    cur.expect('{')?;
    let mut base = None;
    let mut key = None;
    let mut gamma = None;
    let mut limit = None;
    let mut explicit = None;
    let mut tail = false;
    let mut first = true;
    while cur.peek() != Some('}') {
        if !first {
            cur.expect(',')?;
        }
        first = false;
        cur.skip_ws();
        let at = cur.pos();
        let field = cur.ident()?;
        cur.expect(':')?;
        match field {
            "base" => base = Some(parse_chain(cur)?),
            "key" => key = Some(parse_poly(cur)?),
            "gamma" => {
                cur.skip_ws();
                let at = cur.pos() + 1;
                let src = cur.quoted()?;
                gamma = Some(SequenceRule::parse(src).map_err(|e| {
                    crate::error::ParseError::new(at + e.offset, e.message)
                })?);
            }
            "limit" => {
                cur.skip_ws();
                let at = cur.pos() + 1;
                let src = cur.quoted()?;
                limit = Some(LimitDescriptor::parse(src).map_err(|e| {
                    crate::error::ParseError::new(at + e.offset, e.message)
                })?);
            }
            "explicit" => {
                cur.expect('[')?;
                let mut members = Vec::new();
                while cur.peek() != Some(']') {
                    if !members.is_empty() {
                        cur.expect(',')?;
                    }
                    members.push(parse_chain(cur)?);
                }
                cur.expect(']')?;
                explicit = Some(members);
            }
            "tail" => {
                tail = if cur.eat_keyword("true") {
                    true
                } else {
                    cur.expect_keyword("false")?;
                    false
                }
            }
            other => {
                return Err(crate::error::ParseError::new(at, format!("unknown family field '{other}'")))
            }
        }
    }
    cur.expect('}')?;
    let built = match (explicit, base, key, gamma) {
        (Some(members), None, None, None) => IncreasingFamily::explicit(members, tail, limit),
        (None, Some(base), Some(key), Some(gamma)) => {
            let limit = limit.ok_or_else(|| crate::error::ParseError::new(start, "family is missing 'limit'"))?;
            IncreasingFamily::parametric(base, key, gamma, limit)
        }
        _ => {
            return Err(crate::error::ParseError::new(
                start,
                "a family needs either 'explicit' or all of 'base', 'key', 'gamma', 'limit'",
            ))
        }
    };
    built.map_err(|e| crate::error::ParseError::new(start, e.to_string()))
}

/// A monic unstable polynomial of least degree.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitKey {
    pub poly: Poly,
    /// True when found by a bounded search rather than by construction.
    pub bounded: bool,
}

/// Coefficient height for the bounded limit-key search on explicit families.
pub const DEFAULT_HEIGHT: i64 = 4;

pub fn limit_key_poly(fam: &IncreasingFamily, height: i64, cutoff: usize) -> Result<LimitKey> {
    match fam {
        IncreasingFamily::Parametric { key, .. } => Ok(LimitKey { poly: key.clone(), bounded: false }),
        IncreasingFamily::Explicit { members, .. } => {
            let max_deg = members.iter().map(|m| m.degree_sv().0).max().unwrap_or(1);
            for d in 1..=max_deg {
                let mut candidates: Vec<Poly> = members
                    .iter()
                    .flat_map(|m| m.steps().iter().map(|s| s.key.clone()))
                    .chain(std::iter::once(Poly::x()))
                    .filter(|k| k.degree() == Some(d))
                    .collect();
                candidates.extend(monic_of_degree(d, height));
                for c in candidates {
                    if fam.is_stable(&c, cutoff)?.is_unstable() {
                        return Ok(LimitKey { poly: c, bounded: true });
                    }
                }
            }
            Err(Error::AllStable(format!(
                "no unstable monic polynomial of degree ≤ {max_deg} and height ≤ {height}"
            )))
        }
    }
}

fn monic_of_degree(d: usize, height: i64) -> Vec<Poly> {
    let mut out = vec![vec![]];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<i64>| {
                (-height..=height).map(move |c| {
                    let mut v = prefix.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
    }
    out.into_iter()
        .map(|mut coeffs| {
            coeffs.push(1);
            Poly::from_ints(&coeffs)
        })
        .collect()
}

/// The supremum cut of `ν_i(Q)` and its canonical representative.
pub fn sup_cut(fam: &IncreasingFamily, q: &Poly) -> Result<QuasiCut> {
    match fam {
        IncreasingFamily::Parametric { limit, .. } => {
            let c = fam.expansion_values(q).unwrap();
            match limit {
                LimitDescriptor::Unbounded => Ok(QuasiCut::PlusInfinity),
                LimitDescriptor::Approaches(l) => {
                    let bound = c
                        .iter()
                        .enumerate()
                        .skip(1)
                        .filter_map(|(j, v)| first(v).map(|a| a + l * Rational::from_integer(j.into())))
                        .min()
                        .ok_or_else(|| Error::Family(format!("{q} has no growing terms")))?;
                    Ok(QuasiCut::Below(bound))
                }
                _ => unreachable!("rejected at construction"),
            }
        }
        IncreasingFamily::Explicit { members, limit, .. } => {
            let limit = limit.clone().ok_or_else(|| {
                Error::Family("explicit family declares no limit for the values of its limit key".into())
            })?;
            let terms = members
                .iter()
                .map(|m| {
                    let v = m.evaluate(q);
                    match v.finite() {
                        Some(l) if l.in_divisible_hull() => Ok(l.first().clone()),
                        _ => Err(Error::Family(format!("ν_i({q}) = {v} is not a rational value"))),
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            qc_sup(&RationalSequence {
                terms: SequenceTerms::Explicit(terms),
                limit,
            })
        }
    }
}

pub fn sup_gamma(fam: &IncreasingFamily, q: &Poly) -> Result<GroupValue> {
    if let IncreasingFamily::Parametric { limit: LimitDescriptor::Irrational, .. } = fam {
        return Err(Error::UnsupportedLimit("irrational limit".into()));
    }
    Ok(qc_representative(&sup_cut(fam, q)?))
}

/// A limit of an increasing family, evaluable like a chain.
#[derive(Clone, Debug, PartialEq)]
pub enum LimitValuation {
    Stable { family: IncreasingFamily, cutoff: usize },
    Augmented { family: IncreasingFamily, key: Poly, gamma: GroupValue, cutoff: usize },
}

impl LimitValuation {
    pub fn family(&self) -> &IncreasingFamily {
        match self {
            LimitValuation::Stable { family, .. } | LimitValuation::Augmented { family, .. } => family,
        }
    }

    /// Stable values of `f`, or an error naming the instability.
    fn stable_value(family: &IncreasingFamily, f: &Poly, cutoff: usize) -> Result<GroupValue> {
        match family.is_stable(f, cutoff)? {
            Stability::Stable { value, .. } => Ok(value),
            Stability::Unstable { i, j, vi, vj } => Err(Error::Unstable {
                poly: f.to_string(),
                detail: format!("ν_{i} = {vi} < ν_{j} = {vj}"),
            }),
            Stability::Undetermined => Err(Error::Undetermined(f.to_string())),
        }
    }

    pub fn evaluate(&self, f: &Poly) -> Result<GroupValue> {
        match self {
            LimitValuation::Stable { family, cutoff } => Self::stable_value(family, f, *cutoff),
            LimitValuation::Augmented { family, key, gamma, cutoff } => {
                if f.is_zero() {
                    return Ok(GroupValue::Infinity);
                }
                let mut best = GroupValue::Infinity;
                for (j, fj) in expand_unchecked(f, key).iter().enumerate() {
                    if fj.is_zero() {
                        continue;
                    }
                    let term = &Self::stable_value(family, fj, *cutoff)? + &gamma.times(j);
                    best = best.min(term);
                }
                Ok(best)
            }
        }
    }

    /// The same valuation as a chain, when the family is parametric.
    pub fn as_chain(&self) -> Option<ValuationChain> {
        match self {
            LimitValuation::Augmented {
                family: IncreasingFamily::Parametric { base, .. },
                key,
                gamma,
                ..
            } => {
                let c = base.augment(key, gamma).ok()?;
                Some(if base.is_validated() { c.assume_valid() } else { c })
            }
            _ => None,
        }
    }

    pub fn classify(&self) -> Classification {
        match self {
            LimitValuation::Stable { .. } => Classification::ValuationAlgebraic,
            LimitValuation::Augmented { gamma, .. } => match gamma {
                GroupValue::Infinity => Classification::NontrivialSupport,
                GroupValue::Finite(g) if g.in_divisible_hull() => Classification::ResidueTranscendental,
                GroupValue::Finite(_) => Classification::ValueTranscendental,
            },
        }
    }
}

impl Evaluable for LimitValuation {
    fn prime(&self) -> u64 {
        self.family().prime()
    }

    fn try_eval(&self, f: &Poly) -> Result<GroupValue> {
        self.evaluate(f)
    }
}

impl fmt::Display for LimitValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LimitValuation::Stable { family, .. } => write!(f, "limit {{ family: {family}, stable }}"),
            LimitValuation::Augmented { family, key, gamma, .. } => {
                write!(f, "limit {{ family: {family}, key: {key}, gamma: {gamma} }}")
            }
        }
    }
}

/// True when `c ≥ ν_i` for every member, decided from the presentation.
pub fn family_upper_bound(fam: &IncreasingFamily, c: &dyn Evaluable) -> Result<bool> {
    match fam {
        IncreasingFamily::Parametric { base, key, limit, .. } => {
            if !le(base, c)? {
                return Ok(false);
            }
            let v = c.try_eval(key)?;
            Ok(match (limit, &v) {
                (_, GroupValue::Infinity) => true,
                (LimitDescriptor::Approaches(q), GroupValue::Finite(g)) => g.first() >= q,
                _ => false,
            })
        }
        IncreasingFamily::Explicit { members, .. } => {
            for m in members {
                if !le(m, c)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// `μ_{Q,γ}`; requires `Q` unstable and `γ > ν_i(Q)` for every member.
pub fn limit_augment(fam: &IncreasingFamily, q: &Poly, gamma: &GroupValue, cutoff: usize) -> Result<LimitValuation> {
    if !q.is_monic() || q.is_constant() {
        return Err(Error::BadKey(q.to_string()));
    }
    match fam.is_stable(q, cutoff)? {
        Stability::Stable { .. } => {
            return Err(Error::Precondition(format!("{q} is stable for the family; use the stable limit")))
        }
        Stability::Undetermined => return Err(Error::Undetermined(q.to_string())),
        Stability::Unstable { .. } => {}
    }
    let cut = sup_cut(fam, q)?;
    let above_all = match (&cut, gamma) {
        (_, GroupValue::Infinity) => true,
        (QuasiCut::PlusInfinity, _) => false,
        (QuasiCut::Below(l), GroupValue::Finite(g)) => g.first() >= l,
        (c, g) => qc_of_value(g)? > *c,
    };
    for m in fam.prefix()? {
        if m.evaluate(q) >= *gamma {
            return Err(Error::Precondition(format!("γ = {gamma} does not exceed ν_i({q}) = {}", m.evaluate(q))));
        }
    }
    if !above_all {
        return Err(Error::Precondition(format!(
            "γ = {gamma} does not exceed every ν_i({q}) (supremum cut {cut})"
        )));
    }
    let limit = LimitValuation::Augmented {
        family: fam.clone(),
        key: q.clone(),
        gamma: gamma.clone(),
        cutoff,
    };
    // Coefficients of lower degree must have stable values.
    for k in 0..q.degree().unwrap() {
        limit.evaluate(&Poly::x().pow(k))?;
    }
    Ok(limit)
}

pub fn stable_limit(fam: &IncreasingFamily, cutoff: usize) -> LimitValuation {
    LimitValuation::Stable {
        family: fam.clone(),
        cutoff,
    }
}

/// Case split: the augmented limit at the limit key polynomial, or the
/// stable limit when every polynomial is stable.
pub fn supremum(fam: &IncreasingFamily, cutoff: usize) -> Result<LimitValuation> {
    match limit_key_poly(fam, DEFAULT_HEIGHT, cutoff) {
        Ok(key) => {
            let gamma = sup_gamma(fam, &key.poly)?;
            limit_augment(fam, &key.poly, &gamma, cutoff)
        }
        Err(Error::AllStable(detail)) => match fam {
            IncreasingFamily::Explicit { tail: true, .. } => Ok(stable_limit(fam, cutoff)),
            _ => Err(Error::Undetermined(format!("case undetermined at cutoff: {detail}"))),
        },
        Err(e) => Err(e),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SupremumReport {
    pub upper_bound: bool,
    pub minimal: bool,
    /// Candidates that are upper bounds, lie below the limit and differ from it.
    pub beaten_by: Vec<String>,
    /// Candidates outside `T_sme`, where minimality is not claimed.
    pub skipped: Vec<String>,
    pub q_variants_checked: usize,
    pub q_independent: bool,
    pub failures: Vec<String>,
}

impl SupremumReport {
    pub fn passed(&self) -> bool {
        self.upper_bound && self.minimal && self.q_independent && self.failures.is_empty()
    }
}

/// True when every value of the chain is a canonical `Γ_sme` representative.
pub fn in_t_sme(c: &ValuationChain) -> bool {
    let canonical = |g: &GroupValue| match g {
        GroupValue::Infinity => true,
        GroupValue::Finite(v) => {
            v.rank() <= 2 && [-1, 0, 1].iter().any(|t| v.coord(1) == Rational::from_integer((*t).into()))
                && (2..v.rank()).all(|i| num::Zero::is_zero(&v.coord(i)))
        }
    };
    canonical(&GroupValue::Finite(c.root().clone())) && c.steps().iter().all(|s| canonical(&s.value))
}

/// Checks that `limit` is an upper bound of the family, that no candidate in
/// `T_sme` lies strictly between the family and the limit, and that the
/// limit does not depend on the choice of limit key polynomial.
pub fn verify_supremum(
    limit: &dyn Evaluable,
    fam: &IncreasingFamily,
    candidates: &[ValuationChain],
    samples: &[Poly],
    cutoff: usize,
) -> Result<SupremumReport> {
    let mut report = SupremumReport {
        upper_bound: family_upper_bound(fam, limit)?,
        minimal: true,
        q_independent: true,
        ..Default::default()
    };
    for m in fam.prefix()? {
        for f in samples {
            if m.evaluate(f) > limit.try_eval(f)? {
                report.upper_bound = false;
                report.failures.push(format!("{m} exceeds the limit at {f}"));
                break;
            }
        }
    }
    for c in candidates {
        if !in_t_sme(c) {
            report.skipped.push(c.to_string());
            continue;
        }
        if !family_upper_bound(fam, c)? || !le(c, limit)? {
            continue;
        }
        let differs = samples
            .iter()
            .map(|f| Ok(c.evaluate(f) != limit.try_eval(f)?))
            .collect::<Result<Vec<bool>>>()?
            .into_iter()
            .any(|d| d);
        let below_keys = le_by_meet(c, limit)?;
        if differs || !below_keys {
            report.minimal = false;
            report.beaten_by.push(c.to_string());
        }
    }
    if let Ok(key) = limit_key_poly(fam, DEFAULT_HEIGHT, cutoff) {
        let gamma = sup_gamma(fam, &key.poly)?;
        let reference = limit_augment(fam, &key.poly, &gamma, cutoff)?;
        let d = key.poly.degree().unwrap();
        let shifts: Vec<Poly> = (0..d)
            .flat_map(|k| [1i64, 2, 4, 8, -4].map(|a| Poly::monomial(Rational::from_integer(a.into()), k)))
            .collect();
        for h in shifts {
            let q2 = &key.poly + &h;
            if !fam.is_stable(&q2, cutoff)?.is_unstable() || sup_cut(fam, &q2)? != sup_cut(fam, &key.poly)? {
                continue;
            }
            let alt = limit_augment(fam, &q2, &gamma, cutoff)?;
            report.q_variants_checked += 1;
            for f in samples {
                if alt.evaluate(f)? != reference.evaluate(f)? {
                    report.q_independent = false;
                    report.failures.push(format!("limit with key {q2} differs at {f}"));
                    break;
                }
            }
        }
    }
    Ok(report)
}

/// `c ≤ limit` witnessed through the meet: `c ∧ limit = c`.
fn le_by_meet(c: &ValuationChain, limit: &dyn Evaluable) -> Result<bool> {
    Ok(meet_with(c, limit)? == *c)
}

/// A weak-tree subbasic open set `[ν]_μ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Subbasic {
    pub mu: ValuationChain,
    pub nu: ValuationChain,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NetLimitReport {
    /// Per descriptor: first index from which every inspected member lies in `[ν]_μ`.
    pub thresholds: Vec<Option<usize>>,
    pub probe: usize,
}

impl NetLimitReport {
    pub fn all_finite(&self) -> bool {
        self.thresholds.iter().all(Option::is_some)
    }
}

/// `η ∈ [ν]_μ` for `η` any valuation: `μ ∉ [ν, η]`.
pub fn in_class(eta: &dyn Evaluable, nu: &ValuationChain, mu: &ValuationChain) -> Result<bool> {
    let m = meet_with(nu, eta)?;
    let mu_in_interval = le(&m, mu)? && (le(mu, nu)? || le(mu, eta)?);
    Ok(!mu_in_interval)
}

/// Verifies that the family enters every subbasic neighbourhood of the candidate.
pub fn net_limit_check(fam: &IncreasingFamily, candidate: &dyn Evaluable, descriptors: &[Subbasic]) -> Result<NetLimitReport> {
    let members = fam.prefix()?;
    let mut thresholds = Vec::new();
    for d in descriptors {
        if compare(&d.nu, &d.mu)?.verdict == Verdict::Eq || !in_class(candidate, &d.nu, &d.mu)? {
            return Err(Error::Precondition(format!(
                "candidate is not in the class of {} at {}",
                d.nu, d.mu
            )));
        }
        let inside = members
            .iter()
            .map(|m| Ok(compare(m, &d.mu)?.verdict != Verdict::Eq && in_class(m, &d.nu, &d.mu)?))
            .collect::<Result<Vec<bool>>>()?;
        let threshold = (0..inside.len()).find(|&i| inside[i..].iter().all(|b| *b));
        thresholds.push(threshold);
    }
    Ok(NetLimitReport {
        thresholds,
        probe: members.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valuation::fixtures::*;
    use crate::valuation::{default_sample, equivalent};
    use crate::value::rat;

    fn fam(base: ValuationChain, key: &str, rule: &str, limit: &str) -> IncreasingFamily {
        IncreasingFamily::parametric(
            base,
            p(key),
            SequenceRule::parse(rule).unwrap(),
            LimitDescriptor::parse(limit).unwrap(),
        )
        .unwrap()
    }

    fn unbounded() -> IncreasingFamily {
        fam(gauss(), "x", "i", "inf")
    }

    fn bounded() -> IncreasingFamily {
        fam(gauss(), "x", "1 - 1/2^i", "1-")
    }

    #[test]
    fn stability_examples() {
        match unbounded().is_stable(&p("x"), 8).unwrap() {
            Stability::Unstable { i, j, vi, vj } => {
                assert_eq!((i, j), (0, 1));
                assert_eq!((vi, vj), (v("(0)"), v("(1)")));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            bounded().is_stable(&p("2"), 8).unwrap(),
            Stability::Stable { value: v("(1)"), index: Some(0) }
        );
        assert!(bounded().is_stable(&p("x+2"), 8).unwrap().is_unstable());
        assert!(unbounded().is_stable(&p("x+2"), 8).unwrap().is_stable());
        assert!(bounded().is_stable(&p("x+1"), 8).unwrap().is_stable());
    }

    #[test]
    fn stability_matches_brute_force_on_members() {
        for f in ["x+2", "x+4", "x^2+x+1/2", "x^3 + 8", "3*x^2 + 1/2*x"] {
            let f = p(f);
            let vals: Vec<GroupValue> = (0..40).map(|i| bounded().member(i).unwrap().evaluate(&f)).collect();
            let eventually_constant = vals[30..].windows(2).all(|w| w[0] == w[1]);
            assert_eq!(bounded().is_stable(&f, 8).unwrap().is_stable(), eventually_constant, "{f}");
        }
    }

    #[test]
    fn limit_key_examples() {
        assert_eq!(limit_key_poly(&unbounded(), 4, 8).unwrap().poly, p("x"));
        let f = fam(mu1(), "x^2+2", "3/2 + i", "inf");
        assert_eq!(limit_key_poly(&f, 4, 8).unwrap().poly, p("x^2+2"));
        let members = vec![gauss(), chain(&[("x", "(1)")]), chain(&[("x", "(2)")])];
        let tail = IncreasingFamily::explicit(members.clone(), true, None).unwrap();
        assert!(matches!(limit_key_poly(&tail, 2, 8), Err(Error::AllStable(_))));
        let open = IncreasingFamily::explicit(members, false, None).unwrap();
        assert_eq!(limit_key_poly(&open, 2, 8).unwrap(), LimitKey { poly: p("x"), bounded: true });
    }

    #[test]
    fn sup_gamma_examples() {
        assert_eq!(sup_gamma(&unbounded(), &p("x")).unwrap(), GroupValue::Infinity);
        assert_eq!(sup_gamma(&bounded(), &p("x")).unwrap(), v("(1,-1)"));
        let f = fam(mu1(), "x^2+2", "2 - 1/3^i", "2-");
        assert_eq!(sup_gamma(&f, &p("x^2+2")).unwrap(), v("(2,-1)"));
    }

    #[test]
    fn limit_augment_examples() {
        let lim = limit_augment(&unbounded(), &p("x"), &GroupValue::Infinity, 8).unwrap();
        assert_eq!(lim.evaluate(&p("x^2+3*x+4")).unwrap(), v("(2)"));
        assert_eq!(lim.evaluate(&p("x^2")).unwrap(), GroupValue::Infinity);
        let lim = limit_augment(&bounded(), &p("x"), &v("(1,-1)"), 8).unwrap();
        assert_eq!(lim.evaluate(&p("x+2")).unwrap(), v("(1,-1)"));
        assert!(limit_augment(&bounded(), &p("x"), &v("(1/2)"), 8).is_err());
        assert!(limit_augment(&bounded(), &p("x"), &v("(1,-1)"), 8).unwrap().as_chain().is_some());
    }

    #[test]
    fn stable_limit_examples() {
        let members = vec![gauss(), chain(&[("x", "(1)")]), chain(&[("x", "(2)")])];
        let tail = IncreasingFamily::explicit(members.clone(), true, None).unwrap();
        let lim = stable_limit(&tail, 8);
        assert_eq!(lim.evaluate(&p("x^2+x")).unwrap(), members[2].evaluate(&p("x^2+x")));
        assert_eq!(lim.classify(), Classification::ValuationAlgebraic);
        let lim = stable_limit(&unbounded(), 8);
        assert!(matches!(lim.evaluate(&p("x")), Err(Error::Unstable { .. })));
        assert_eq!(lim.evaluate(&p("6")).unwrap(), v("(1)"));
    }

    #[test]
    fn supremum_verification() {
        let limit = limit_augment(&bounded(), &p("x"), &v("(1,-1)"), 8).unwrap();
        let samples = default_sample(&chain(&[("x", "(1)")]), 40, 1);
        let alt = chain(&[("x+4", "(1,-1)")]);
        let report = verify_supremum(&limit, &bounded(), &[chain(&[("x", "(1)")]), alt], &samples, 8).unwrap();
        assert!(report.passed(), "{report:?}");
        assert!(report.q_variants_checked > 0);

        let wrong = chain(&[("x", "(1)")]);
        let report = verify_supremum(&wrong, &bounded(), &[limit.as_chain().unwrap()], &samples, 8).unwrap();
        assert!(report.upper_bound);
        assert!(!report.minimal);
        assert_eq!(report.beaten_by.len(), 1);
    }

    #[test]
    fn sme_limits_are_equivalent() {
        let a = limit_augment(&bounded(), &p("x"), &v("(1,-1)"), 8).unwrap().as_chain().unwrap();
        let b = limit_augment(&bounded(), &p("x"), &v("(1,-7)"), 8).unwrap().as_chain().unwrap();
        assert!(equivalent(&a, &b, &default_sample(&a, 50, 2)).unwrap());
    }

    #[test]
    fn net_limit_examples() {
        let limit = limit_augment(&bounded(), &p("x"), &v("(1,-1)"), 8).unwrap().as_chain().unwrap();
        let d = |mu: ValuationChain| Subbasic { mu, nu: limit.clone() };
        let report = net_limit_check(
            &bounded(),
            &limit,
            &[d(chain(&[("x", "(1/2)")])), d(gauss()), d(chain(&[("x+1", "(1)")]))],
        )
        .unwrap();
        // Member 1 is [G; x, 1/2] itself and member 0 is the Gauss valuation itself.
        assert_eq!(report.thresholds, vec![Some(2), Some(1), Some(0)]);
        let bad = Subbasic { mu: limit.clone(), nu: gauss() };
        assert!(net_limit_check(&bounded(), &limit, &[bad]).is_err());
    }

    #[test]
    fn family_text_round_trip() {
        let src = r#"fam { base: val { p: 2, rank: 1, root: (0), steps: [] }, key: x, gamma: "1 - 1/2^i", limit: "1-" }"#;
        let f = IncreasingFamily::parse(src).unwrap();
        assert_eq!(f, bounded());
        assert_eq!(IncreasingFamily::parse(&f.to_string()).unwrap(), f);
        let e = IncreasingFamily::explicit(vec![gauss(), mu1()], true, Some(LimitDescriptor::Approaches(rat(1, 1)))).unwrap();
        assert_eq!(IncreasingFamily::parse(&e.to_string()).unwrap(), e);
        assert!(IncreasingFamily::parse(r#"fam { base: val { p: 2, root: (0) }, key: x, gamma: "i", limit: "irrational" }"#).is_err());
        let err = IncreasingFamily::parse(r#"fam { base: val { p: 2, root: (0) }, key: x, gamma: "1 - * i", limit: "1-" }"#).unwrap_err();
        assert_eq!(err.offset, 57);
    }

    #[test]
    fn augmented_limit_upper_bounds_members() {
        let lim = limit_augment(&bounded(), &p("x"), &v("(1,-1)"), 8).unwrap();
        for m in bounded().prefix().unwrap() {
            assert!(le(&m, &lim).unwrap());
            assert!(m.evaluate(&p("x")) < lim.evaluate(&p("x")).unwrap());
        }
        assert_eq!(lim.evaluate(&p("x")).unwrap(), v("(1,-1)"));
    }
}
