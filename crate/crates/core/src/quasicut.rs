//! Quasi-cuts of `Γ_Q = Q` and their canonical representatives in `Q²_lex`.

use std::cmp::Ordering;
use std::fmt;

use num::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::text::{parse_all, Cursor, PResult};
use crate::value::{GroupValue, LexValue, Rational};

/// `Below(q)`: `δ^L = (−∞,q)`, `δ^R = [q,∞)`.
/// `Principal(q)`: `δ^L = (−∞,q]`, `δ^R = [q,∞)`.
/// `Above(q)`: `δ^L = (−∞,q]`, `δ^R = (q,∞)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuasiCut {
    Below(Rational),
    Principal(Rational),
    Above(Rational),
    PlusInfinity,
}

impl QuasiCut {
    fn key(&self) -> Option<(&Rational, u8)> {
        match self {
            QuasiCut::Below(q) => Some((q, 0)),
            QuasiCut::Principal(q) => Some((q, 1)),
            QuasiCut::Above(q) => Some((q, 2)),
            QuasiCut::PlusInfinity => None,
        }
    }

    /// Membership of a rational in the left set `δ^L`.
    pub fn left_contains(&self, r: &Rational) -> bool {
        match self {
            QuasiCut::Below(q) => r < q,
            QuasiCut::Principal(q) | QuasiCut::Above(q) => r <= q,
            QuasiCut::PlusInfinity => true,
        }
    }

    /// Membership of a rational in the right set `δ^R`.
    pub fn right_contains(&self, r: &Rational) -> bool {
        match self {
            QuasiCut::Below(q) | QuasiCut::Principal(q) => r >= q,
            QuasiCut::Above(q) => r > q,
            QuasiCut::PlusInfinity => false,
        }
    }

    pub fn parse(src: &str) -> PResult<QuasiCut> {
        parse_all(src, |cur| {
            cur.expect_keyword("cut")?;
            cur.expect(':')?;
            if cur.eat_str("+inf") {
                return Ok(QuasiCut::PlusInfinity);
            }
            let q = cur.rational()?;
            Ok(match cur.peek_raw() {
                Some('-') => {
                    cur.bump();
                    QuasiCut::Below(q)
                }
                Some('+') => {
                    cur.bump();
                    QuasiCut::Above(q)
                }
                _ => QuasiCut::Principal(q),
            })
        })
    }
}

impl PartialOrd for QuasiCut {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuasiCut {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.key(), other.key()) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Greater,
            (Some(_), None) => Ordering::Less,
            (Some(a), Some(b)) => a.cmp(&b),
        }
    }
}

impl fmt::Display for QuasiCut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuasiCut::Below(q) => write!(f, "cut:{q}-"),
            QuasiCut::Principal(q) => write!(f, "cut:{q}"),
            QuasiCut::Above(q) => write!(f, "cut:{q}+"),
            QuasiCut::PlusInfinity => write!(f, "cut:+inf"),
        }
    }
}

/// The quasi-cut `δ_α` with `δ_α^L = {q ∈ Q | q ≤ α}`.
pub fn qc_of_value(alpha: &GroupValue) -> Result<QuasiCut> {
    let v = match alpha {
        GroupValue::Infinity => return Ok(QuasiCut::PlusInfinity),
        GroupValue::Finite(v) => v,
    };
    if v.coords().iter().skip(2).any(|c| !c.is_zero()) {
        return Err(Error::RankTooLarge(alpha.to_string()));
    }
    let a = v.first().clone();
    let t = v.coord(1);
    Ok(if t.is_zero() {
        QuasiCut::Principal(a)
    } else if t.is_positive() {
        QuasiCut::Above(a)
    } else {
        QuasiCut::Below(a)
    })
}

pub fn qc_cmp(a: &QuasiCut, b: &QuasiCut) -> Ordering {
    a.cmp(b)
}

/// `α ∼sme β ⟺ δ_α = δ_β`.
pub fn sme_equivalent(a: &GroupValue, b: &GroupValue) -> Result<bool> {
    Ok(qc_of_value(a)? == qc_of_value(b)?)
}

/// The fixed element of `Γ_sme` chosen for each quasi-cut.
pub fn qc_representative(cut: &QuasiCut) -> GroupValue {
    let two = |q: &Rational, t: i64| {
        GroupValue::Finite(LexValue::new(vec![q.clone(), Rational::from_integer(t.into())]))
    };
    match cut {
        QuasiCut::Principal(q) => two(q, 0),
        QuasiCut::Below(q) => two(q, -1),
        QuasiCut::Above(q) => two(q, 1),
        QuasiCut::PlusInfinity => GroupValue::Infinity,
    }
}

/// How a monotone sequence behaves at the top.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LimitDescriptor {
    /// The rational limit is a member of the sequence.
    Attained(Rational),
    /// Converges to the rational from below without reaching it.
    Approaches(Rational),
    Unbounded,
    Irrational,
}

impl LimitDescriptor {
    pub fn parse(src: &str) -> PResult<LimitDescriptor> {
        parse_all(src, |cur| {
            if cur.eat_keyword("inf") {
                return Ok(LimitDescriptor::Unbounded);
            }
            if cur.eat_keyword("irrational") {
                return Ok(LimitDescriptor::Irrational);
            }
            let q = cur.rational()?;
            if cur.peek_raw() == Some('-') {
                cur.bump();
                Ok(LimitDescriptor::Approaches(q))
            } else {
                Ok(LimitDescriptor::Attained(q))
            }
        })
    }
}

impl fmt::Display for LimitDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LimitDescriptor::Attained(q) => write!(f, "{q}"),
            LimitDescriptor::Approaches(q) => write!(f, "{q}-"),
            LimitDescriptor::Unbounded => write!(f, "inf"),
            LimitDescriptor::Irrational => write!(f, "irrational"),
        }
    }
}

/// A symbolic rational sequence in the index `i`, e.g. `1 - 1/2^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceRule {
    source: String,
    expr: Expr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Expr {
    Const(Rational),
    Index,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
}

impl Expr {
    fn eval(&self, i: usize) -> Result<Rational> {
        Ok(match self {
            Expr::Const(q) => q.clone(),
            Expr::Index => Rational::from_integer(i.into()),
            Expr::Neg(e) => -e.eval(i)?,
            Expr::Add(a, b) => a.eval(i)? + b.eval(i)?,
            Expr::Sub(a, b) => a.eval(i)? - b.eval(i)?,
            Expr::Mul(a, b) => a.eval(i)? * b.eval(i)?,
            Expr::Div(a, b) => {
                let d = b.eval(i)?;
                if d.is_zero() {
                    return Err(Error::Family(format!("division by zero at i = {i}")));
                }
                a.eval(i)? / d
            }
            Expr::Pow(a, b) => {
                let base = a.eval(i)?;
                let e = b.eval(i)?;
                if !e.is_integer() {
                    return Err(Error::Family(format!("non-integer exponent {e} at i = {i}")));
                }
                let n = e
                    .to_integer()
                    .to_i32()
                    .filter(|n| n.abs() <= 4096)
                    .ok_or_else(|| Error::Family(format!("exponent {e} out of range")))?;
                if n < 0 && base.is_zero() {
                    return Err(Error::Family(format!("0 to a negative power at i = {i}")));
                }
                num::pow::Pow::pow(base, n)
            }
        })
    }
}

impl SequenceRule {
    pub fn parse(src: &str) -> PResult<SequenceRule> {
        let expr = parse_all(src, parse_sum)?;
        Ok(SequenceRule {
            source: src.trim().to_string(),
            expr,
        })
    }

    pub fn term(&self, i: usize) -> Result<Rational> {
        self.expr.eval(i)
    }

    pub fn source(&self) -> &str {
        &self.source
    }
}

fn parse_sum(cur: &mut Cursor<'_>) -> PResult<Expr> {
    let mut lhs = parse_product(cur)?;
    loop {
        if cur.eat('+') {
            lhs = Expr::Add(Box::new(lhs), Box::new(parse_product(cur)?));
        } else if cur.eat('-') {
            lhs = Expr::Sub(Box::new(lhs), Box::new(parse_product(cur)?));
        } else {
            return Ok(lhs);
        }
    }
}

fn parse_product(cur: &mut Cursor<'_>) -> PResult<Expr> {
    let mut lhs = parse_power(cur)?;
    loop {
        if cur.eat('*') {
            lhs = Expr::Mul(Box::new(lhs), Box::new(parse_power(cur)?));
        } else if cur.eat('/') {
            lhs = Expr::Div(Box::new(lhs), Box::new(parse_power(cur)?));
        } else {
            return Ok(lhs);
        }
    }
}

fn parse_power(cur: &mut Cursor<'_>) -> PResult<Expr> {
    if cur.eat('-') {
        return Ok(Expr::Neg(Box::new(parse_power(cur)?)));
    }
    let base = parse_atom(cur)?;
    if cur.eat('^') {
        Ok(Expr::Pow(Box::new(base), Box::new(parse_power(cur)?)))
    } else {
        Ok(base)
    }
}

fn parse_atom(cur: &mut Cursor<'_>) -> PResult<Expr> {
    match cur.peek() {
        Some('(') => {
            cur.bump();
            let e = parse_sum(cur)?;
            cur.expect(')')?;
            Ok(e)
        }
        Some('i') => {
            cur.expect_keyword("i")?;
            Ok(Expr::Index)
        }
        Some(c) if c.is_ascii_digit() => Ok(Expr::Const(Rational::from_integer(cur.unsigned()?))),
        _ => Err(cur.error("expected a number, 'i' or '('")),
    }
}

/// Terms of a monotone rational sequence together with its declared limit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SequenceTerms {
    Explicit(Vec<Rational>),
    Rule(SequenceRule),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSequence {
    pub terms: SequenceTerms,
    pub limit: LimitDescriptor,
}

/// How many leading terms of a rule are inspected to sanity-check its descriptor.
pub const DESCRIPTOR_PROBE: usize = 24;

impl RationalSequence {
    pub fn rule(rule: SequenceRule, limit: LimitDescriptor) -> Self {
        RationalSequence {
            terms: SequenceTerms::Rule(rule),
            limit,
        }
    }

    pub fn explicit(terms: Vec<Rational>, limit: LimitDescriptor) -> Self {
        RationalSequence {
            terms: SequenceTerms::Explicit(terms),
            limit,
        }
    }

    fn probe(&self) -> Result<Vec<Rational>> {
        match &self.terms {
            SequenceTerms::Explicit(ts) => Ok(ts.clone()),
            SequenceTerms::Rule(r) => (0..DESCRIPTOR_PROBE).map(|i| r.term(i)).collect(),
        }
    }

    /// Checks monotonicity and the descriptor against the leading terms.
    pub fn check(&self) -> Result<()> {
        let ts = self.probe()?;
        if ts.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Family("sequence is not monotone increasing".into()));
        }
        match &self.limit {
            LimitDescriptor::Approaches(q) => {
                if let Some(t) = ts.iter().find(|t| *t >= q) {
                    return Err(Error::Family(format!(
                        "term {t} reaches the declared unattained limit {q}"
                    )));
                }
            }
            LimitDescriptor::Attained(q) => {
                if let Some(t) = ts.iter().find(|t| *t > q) {
                    return Err(Error::Family(format!("term {t} exceeds the declared limit {q}")));
                }
            }
            LimitDescriptor::Unbounded | LimitDescriptor::Irrational => {}
        }
        Ok(())
    }
}

/// The quasi-cut `sup δ^L` of the left sets generated by the sequence.
pub fn qc_sup(seq: &RationalSequence) -> Result<QuasiCut> {
    if seq.limit == LimitDescriptor::Irrational {
        return Err(Error::UnsupportedLimit(
            "irrational limits have no decidable quasi-cut representation".into(),
        ));
    }
    seq.check()?;
    match &seq.limit {
        LimitDescriptor::Unbounded => Ok(QuasiCut::PlusInfinity),
        LimitDescriptor::Approaches(q) => Ok(QuasiCut::Below(q.clone())),
        LimitDescriptor::Attained(q) => {
            if seq.probe()?.iter().any(|t| t == q) {
                Ok(QuasiCut::Principal(q.clone()))
            } else {
                Err(Error::Family(format!(
                    "declared limit {q} is not attained by any inspected term"
                )))
            }
        }
        LimitDescriptor::Irrational => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::rat;

    fn r2(a: (i64, i64), t: i64) -> GroupValue {
        GroupValue::Finite(LexValue::new(vec![rat(a.0, a.1), rat(t, 1)]))
    }

    #[test]
    fn cuts_of_values() {
        assert_eq!(qc_of_value(&r2((3, 2), 0)).unwrap(), QuasiCut::Principal(rat(3, 2)));
        assert_eq!(qc_of_value(&r2((1, 1), -1)).unwrap(), QuasiCut::Below(rat(1, 1)));
        assert_eq!(qc_of_value(&GroupValue::Infinity).unwrap(), QuasiCut::PlusInfinity);
        assert_eq!(qc_of_value(&GroupValue::rational(rat(2, 3))).unwrap(), QuasiCut::Principal(rat(2, 3)));
        assert!(qc_of_value(&GroupValue::from_ints(&[1, 0, 1])).is_err());
    }

    #[test]
    fn below_cut_matches_left_set_by_enumeration() {
        // q ≤ (1,−1) in lex order exactly when q < 1
        let alpha = LexValue::new(vec![rat(1, 1), rat(-1, 1)]);
        let cut = qc_of_value(&GroupValue::Finite(alpha.clone())).unwrap();
        for n in -40..=40 {
            let q = rat(n, 16);
            let in_left = LexValue::rational(q.clone()) <= alpha;
            assert_eq!(cut.left_contains(&q), in_left, "q = {q}");
            assert_eq!(cut.right_contains(&q), LexValue::rational(q.clone()) >= alpha);
        }
    }

    #[test]
    fn cut_order_examples() {
        let one = rat(1, 1);
        assert!(QuasiCut::Below(one.clone()) < QuasiCut::Principal(one.clone()));
        assert!(QuasiCut::Principal(one.clone()) < QuasiCut::Above(one.clone()));
        assert!(QuasiCut::Above(one) < QuasiCut::Below(rat(2, 1)));
        assert!(QuasiCut::Above(rat(100, 1)) < QuasiCut::PlusInfinity);
    }

    #[test]
    fn order_agrees_with_set_inclusion() {
        let qs: Vec<Rational> = (-3..=3).map(|n| rat(n, 2)).collect();
        let mut cuts = vec![QuasiCut::PlusInfinity];
        for q in &qs {
            cuts.push(QuasiCut::Below(q.clone()));
            cuts.push(QuasiCut::Principal(q.clone()));
            cuts.push(QuasiCut::Above(q.clone()));
        }
        let probe: Vec<Rational> = (-16..=16).map(|n| rat(n, 8)).collect();
        for a in &cuts {
            for b in &cuts {
                let incl = probe.iter().all(|r| !a.left_contains(r) || b.left_contains(r))
                    && probe.iter().all(|r| !b.right_contains(r) || a.right_contains(r));
                assert_eq!(a <= b, incl, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn sme_examples() {
        assert!(sme_equivalent(&r2((1, 1), -1), &r2((1, 1), -7)).unwrap());
        assert!(!sme_equivalent(&r2((1, 1), 0), &r2((1, 1), -1)).unwrap());
        assert!(sme_equivalent(&GroupValue::Infinity, &GroupValue::Infinity).unwrap());
    }

    #[test]
    fn representatives() {
        assert_eq!(qc_representative(&QuasiCut::Principal(rat(5, 3))), r2((5, 3), 0));
        assert_eq!(qc_representative(&QuasiCut::Below(rat(1, 1))), r2((1, 1), -1));
        assert_eq!(qc_representative(&QuasiCut::PlusInfinity), GroupValue::Infinity);
        for cut in [
            QuasiCut::Below(rat(-2, 3)),
            QuasiCut::Principal(rat(0, 1)),
            QuasiCut::Above(rat(7, 5)),
            QuasiCut::PlusInfinity,
        ] {
            assert_eq!(qc_of_value(&qc_representative(&cut)).unwrap(), cut);
        }
    }

    #[test]
    fn suprema_of_sequences() {
        let geo = RationalSequence::rule(
            SequenceRule::parse("1 - 1/2^i").unwrap(),
            LimitDescriptor::parse("1-").unwrap(),
        );
        assert_eq!(qc_sup(&geo).unwrap(), QuasiCut::Below(rat(1, 1)));

        let lin = RationalSequence::rule(SequenceRule::parse("i").unwrap(), LimitDescriptor::Unbounded);
        assert_eq!(qc_sup(&lin).unwrap(), QuasiCut::PlusInfinity);

        let list = RationalSequence::explicit(
            vec![rat(0, 1), rat(1, 2), rat(3, 4)],
            LimitDescriptor::Attained(rat(3, 4)),
        );
        assert_eq!(qc_sup(&list).unwrap(), QuasiCut::Principal(rat(3, 4)));

        let irr = RationalSequence::rule(SequenceRule::parse("i").unwrap(), LimitDescriptor::Irrational);
        assert!(matches!(qc_sup(&irr), Err(Error::UnsupportedLimit(_))));

        let lying = RationalSequence::rule(
            SequenceRule::parse("1 - 1/2^i").unwrap(),
            LimitDescriptor::Approaches(rat(1, 2)),
        );
        assert!(qc_sup(&lying).is_err());
    }

    #[test]
    fn rule_terms() {
        let r = SequenceRule::parse("2-1/3^i").unwrap();
        assert_eq!(r.term(0).unwrap(), rat(1, 1));
        assert_eq!(r.term(2).unwrap(), rat(17, 9));
        let r = SequenceRule::parse("3/2+i").unwrap();
        assert_eq!(r.term(3).unwrap(), rat(9, 2));
        assert!(SequenceRule::parse("1 - ").is_err());
    }

    #[test]
    fn cut_text_round_trip() {
        for s in ["cut:3/2", "cut:1-", "cut:-2/3+", "cut:+inf"] {
            assert_eq!(QuasiCut::parse(s).unwrap().to_string(), s);
        }
    }
}
