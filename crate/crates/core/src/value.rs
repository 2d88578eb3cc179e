//! Values in `Q^n` with the lexicographic order, extended by a top element.
//!
//! The first coordinate carries the divisible hull of the base value group;
//! later coordinates are infinitesimal refinements. Values of different rank
//! are compared and added after padding the shorter one with trailing zeros.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num::{BigRational, One, Zero};

use crate::error::{Error, Result};
use crate::text::{parse_all, Cursor, PResult};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(n.into(), d.into())
}

/// A finite element of `Q^n_lex`.
#[derive(Clone, Debug)]
pub struct LexValue {
    coords: Vec<Rational>,
}

impl LexValue {
    pub fn new(coords: Vec<Rational>) -> Self {
        assert!(!coords.is_empty(), "a lexicographic value has rank at least 1");
        LexValue { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        LexValue::new(coords.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn rational(q: Rational) -> Self {
        LexValue { coords: vec![q] }
    }

    pub fn zero() -> Self {
        LexValue::rational(Rational::zero())
    }

    pub fn one() -> Self {
        LexValue::rational(Rational::one())
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> Rational {
        self.coords.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    /// The `Γ_Q` part.
    pub fn first(&self) -> &Rational {
        &self.coords[0]
    }

    /// True when every coordinate after the first vanishes.
    pub fn in_divisible_hull(&self) -> bool {
        self.coords[1..].iter().all(Zero::is_zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_positive(&self) -> bool {
        self.cmp(&LexValue::zero()) == Ordering::Greater
    }

    pub fn padded(&self, rank: usize) -> LexValue {
        let mut coords = self.coords.clone();
        if coords.len() < rank {
            coords.resize(rank, Rational::zero());
        }
        LexValue { coords }
    }

    pub fn scale(&self, k: &Rational) -> LexValue {
        LexValue {
            coords: self.coords.iter().map(|c| c * k).collect(),
        }
    }

    pub fn mul_int(&self, k: usize) -> LexValue {
        self.scale(&Rational::from_integer(k.into()))
    }

    pub fn half(&self) -> LexValue {
        self.scale(&rat(1, 2))
    }

    /// Coordinatewise mean; strictly between `self` and `other` when they differ.
    pub fn midpoint(&self, other: &LexValue) -> LexValue {
        (self + other).half()
    }

    fn zip_with(&self, other: &LexValue, f: impl Fn(&Rational, &Rational) -> Rational) -> LexValue {
        let n = self.rank().max(other.rank());
        LexValue {
            coords: (0..n).map(|i| f(&self.coord(i), &other.coord(i))).collect(),
        }
    }
}

impl PartialEq for LexValue {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for LexValue {}

impl PartialOrd for LexValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LexValue {
    fn cmp(&self, other: &Self) -> Ordering {
        let n = self.rank().max(other.rank());
        for i in 0..n {
            match self.coord(i).cmp(&other.coord(i)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl Add for &LexValue {
    type Output = LexValue;
    fn add(self, rhs: &LexValue) -> LexValue {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &LexValue {
    type Output = LexValue;
    fn sub(self, rhs: &LexValue) -> LexValue {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &LexValue {
    type Output = LexValue;
    fn neg(self) -> LexValue {
        LexValue {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for LexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// An element of `Λ_∞ = Q^n_lex ∪ {∞}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum GroupValue {
    Finite(LexValue),
    Infinity,
}

impl GroupValue {
    pub fn zero() -> Self {
        GroupValue::Finite(LexValue::zero())
    }

    pub fn rational(q: Rational) -> Self {
        GroupValue::Finite(LexValue::rational(q))
    }

    pub fn int(n: i64) -> Self {
        GroupValue::rational(Rational::from_integer(n.into()))
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        GroupValue::Finite(LexValue::from_ints(coords))
    }

    pub fn from_rats(coords: &[(i64, i64)]) -> Self {
        GroupValue::Finite(LexValue::new(coords.iter().map(|&(n, d)| rat(n, d)).collect()))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, GroupValue::Infinity)
    }

    pub fn finite(&self) -> Option<&LexValue> {
        match self {
            GroupValue::Finite(v) => Some(v),
            GroupValue::Infinity => None,
        }
    }

    /// `j·γ` with `0·∞ = 0`.
    pub fn times(&self, j: usize) -> GroupValue {
        match self {
            _ if j == 0 => GroupValue::zero(),
            GroupValue::Finite(v) => GroupValue::Finite(v.mul_int(j)),
            GroupValue::Infinity => GroupValue::Infinity,
        }
    }

    pub fn padded(&self, rank: usize) -> GroupValue {
        match self {
            GroupValue::Finite(v) => GroupValue::Finite(v.padded(rank)),
            GroupValue::Infinity => GroupValue::Infinity,
        }
    }

    pub fn rank(&self) -> usize {
        self.finite().map_or(1, LexValue::rank)
    }

    pub fn parse(src: &str) -> PResult<GroupValue> {
        parse_all(src, parse_group_value)
    }
}

impl Add for &GroupValue {
    type Output = GroupValue;
    fn add(self, rhs: &GroupValue) -> GroupValue {
        match (self, rhs) {
            (GroupValue::Finite(a), GroupValue::Finite(b)) => GroupValue::Finite(a + b),
            _ => GroupValue::Infinity,
        }
    }
}

impl fmt::Display for GroupValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupValue::Finite(v) => v.fmt(f),
            GroupValue::Infinity => write!(f, "inf"),
        }
    }
}

impl From<LexValue> for GroupValue {
    fn from(v: LexValue) -> Self {
        GroupValue::Finite(v)
    }
}

pub fn gv_cmp(a: &GroupValue, b: &GroupValue) -> Ordering {
    a.cmp(b)
}

pub fn gv_add(a: &GroupValue, b: &GroupValue) -> GroupValue {
    a + b
}

pub(crate) fn parse_lex_value(cur: &mut Cursor<'_>) -> PResult<LexValue> {
    cur.expect('(')?;
    let mut coords = vec![cur.rational()?];
    while cur.eat(',') {
        coords.push(cur.rational()?);
    }
    cur.expect(')')?;
    Ok(LexValue::new(coords))
}

pub(crate) fn parse_group_value(cur: &mut Cursor<'_>) -> PResult<GroupValue> {
    if cur.eat_keyword("inf") {
        Ok(GroupValue::Infinity)
    } else {
        parse_lex_value(cur).map(GroupValue::Finite)
    }
}

/// An open set of the order topology on `Λ_∞`: either an open interval of
/// `Λ` (never containing `∞`) or a basic neighbourhood `{y > y₀}` of `∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Interval {
    /// `(lower, upper)`, with `None` meaning `-∞` resp. unbounded in `Λ`.
    Open {
        lower: Option<LexValue>,
        upper: Option<LexValue>,
    },
    /// `{y ∈ Λ_∞ | y > y₀}`, which contains `∞`.
    AboveWithInfinity(LexValue),
}

impl Interval {
    pub fn open(lower: Option<LexValue>, upper: Option<LexValue>) -> Result<Interval> {
        if let (Some(l), Some(u)) = (&lower, &upper) {
            if l >= u {
                return Err(Error::EmptyInterval {
                    lower: l.to_string(),
                    upper: u.to_string(),
                });
            }
        }
        Ok(Interval::Open { lower, upper })
    }

    pub fn bounded(lower: LexValue, upper: LexValue) -> Result<Interval> {
        Interval::open(Some(lower), Some(upper))
    }

    pub fn below(upper: LexValue) -> Interval {
        Interval::Open {
            lower: None,
            upper: Some(upper),
        }
    }

    /// `(lower, +∞)` inside `Λ`, excluding `∞`.
    pub fn above_finite(lower: LexValue) -> Interval {
        Interval::Open {
            lower: Some(lower),
            upper: None,
        }
    }

    pub fn contains(&self, y: &GroupValue) -> bool {
        match (self, y) {
            (Interval::Open { .. }, GroupValue::Infinity) => false,
            (Interval::Open { lower, upper }, GroupValue::Finite(v)) => {
                lower.as_ref().is_none_or(|l| l < v) && upper.as_ref().is_none_or(|u| v < u)
            }
            (Interval::AboveWithInfinity(_), GroupValue::Infinity) => true,
            (Interval::AboveWithInfinity(y0), GroupValue::Finite(v)) => y0 < v,
        }
    }

    pub fn contains_infinity(&self) -> bool {
        matches!(self, Interval::AboveWithInfinity(_))
    }

    pub fn lower(&self) -> Option<&LexValue> {
        match self {
            Interval::Open { lower, .. } => lower.as_ref(),
            Interval::AboveWithInfinity(y0) => Some(y0),
        }
    }

    /// Finite upper endpoint, if any.
    pub fn upper(&self) -> Option<&LexValue> {
        match self {
            Interval::Open { upper, .. } => upper.as_ref(),
            Interval::AboveWithInfinity(_) => None,
        }
    }

    /// Intersection of two open sets, `None` when empty.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lower = match (self.lower(), other.lower()) {
            (Some(a), Some(b)) => Some(a.max(b).clone()),
            (a, b) => a.or(b).cloned(),
        };
        if self.contains_infinity() && other.contains_infinity() {
            return lower.map(Interval::AboveWithInfinity);
        }
        let upper = match (self.upper(), other.upper()) {
            (Some(a), Some(b)) => Some(a.min(b).clone()),
            (a, b) => a.or(b).cloned(),
        };
        Interval::open(lower, upper).ok()
    }

    /// Every element of `self` is strictly below every element of `other`.
    pub fn entirely_below(&self, other: &Interval) -> bool {
        match (self.upper(), other.lower()) {
            (Some(u), Some(l)) => u <= l,
            _ => false,
        }
    }

    pub fn parse(src: &str) -> PResult<Interval> {
        parse_all(src, parse_interval)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Interval::Open { lower, upper } => {
                write!(f, "open(")?;
                match lower {
                    Some(l) => write!(f, "{l}")?,
                    None => write!(f, "-inf")?,
                }
                write!(f, ", ")?;
                match upper {
                    Some(u) => write!(f, "{u}")?,
                    None => write!(f, "+inf")?,
                }
                write!(f, ")")
            }
            Interval::AboveWithInfinity(y0) => write!(f, "above({y0})"),
        }
    }
}

pub(crate) fn parse_interval(cur: &mut Cursor<'_>) -> PResult<Interval> {
    let at = cur.pos();
    if cur.eat_keyword("above") {
        cur.expect('(')?;
        let y0 = parse_lex_value(cur)?;
        cur.expect(')')?;
        return Ok(Interval::AboveWithInfinity(y0));
    }
    cur.expect_keyword("open")?;
    cur.expect('(')?;
    let lower = if cur.eat_str("-inf") {
        None
    } else {
        Some(parse_lex_value(cur)?)
    };
    cur.expect(',')?;
    let upper = if cur.eat_str("+inf") {
        None
    } else {
        Some(parse_lex_value(cur)?)
    };
    cur.expect(')')?;
    Interval::open(lower, upper).map_err(|e| crate::error::ParseError::new(at, e.to_string()))
}

/// Order-separating neighbourhoods: `γ ∈ U`, `γ' ∈ U'` and `U < U'`.
///
/// For finite `γ < γ'` the cut point is the midpoint (the order is dense);
/// for `γ' = ∞` it is `γ + 1`.
pub fn separate(lo: &GroupValue, hi: &GroupValue) -> Result<(Interval, Interval)> {
    if lo >= hi {
        return Err(Error::Precondition(format!(
            "separate needs {lo} < {hi}"
        )));
    }
    match (lo, hi) {
        (GroupValue::Finite(a), GroupValue::Finite(b)) => {
            let mid = a.midpoint(b);
            Ok((Interval::below(mid.clone()), Interval::above_finite(mid)))
        }
        (GroupValue::Finite(a), GroupValue::Infinity) => {
            let cut = a + &LexValue::one();
            Ok((Interval::below(cut.clone()), Interval::AboveWithInfinity(cut)))
        }
        (GroupValue::Infinity, _) => unreachable!("∞ is maximal"),
    }
}

/// Neighbourhoods `V ∋ γ`, `V' ∋ γ'` whose sumset lies inside `target`.
///
/// Finite summands split the margins of `target` around `γ+γ'` in half;
/// infinite summands use the `∞`-neighbourhood construction.
pub fn sum_preimage(
    a: &GroupValue,
    b: &GroupValue,
    target: &Interval,
) -> Result<(Interval, Interval)> {
    let sum = a + b;
    if !target.contains(&sum) {
        return Err(Error::Precondition(format!(
            "{a} + {b} = {sum} does not lie in {target}"
        )));
    }
    match (a, b) {
        (GroupValue::Finite(x), GroupValue::Finite(y)) => {
            let s = x + y;
            match target {
                Interval::Open { lower, upper } => {
                    let below_margin = lower.as_ref().map(|l| (&s - l).half());
                    let above_margin = upper.as_ref().map(|u| (u - &s).half());
                    let around = |v: &LexValue| Interval::Open {
                        lower: below_margin.as_ref().map(|m| v - m),
                        upper: above_margin.as_ref().map(|m| v + m),
                    };
                    Ok((around(x), around(y)))
                }
                Interval::AboveWithInfinity(y0) => {
                    let m = (&s - y0).half();
                    Ok((
                        Interval::AboveWithInfinity(x - &m),
                        Interval::AboveWithInfinity(y - &m),
                    ))
                }
            }
        }
        (GroupValue::Infinity, GroupValue::Infinity) => {
            let y0 = target.lower().expect("an ∞-neighbourhood has a lower end").clone();
            Ok((
                Interval::AboveWithInfinity(y0),
                Interval::AboveWithInfinity(LexValue::zero()),
            ))
        }
        (GroupValue::Infinity, GroupValue::Finite(g)) => {
            let (v, w) = infinite_summand(g, target);
            Ok((v, w))
        }
        (GroupValue::Finite(g), GroupValue::Infinity) => {
            let (v, w) = infinite_summand(g, target);
            Ok((w, v))
        }
    }
}

/// Returns `(V ∋ ∞, V' ∋ g)` with `V + V' ⊆ target`, using the margin `β = 1`.
fn infinite_summand(g: &LexValue, target: &Interval) -> (Interval, Interval) {
    let y0 = target.lower().expect("an ∞-neighbourhood has a lower end");
    let one = LexValue::one();
    (
        Interval::AboveWithInfinity(&(y0 - g) + &one),
        Interval::AboveWithInfinity(g - &one),
    )
}

/// A rational strictly between `lo < hi`, preferring a `Γ_Q` point.
///
/// When the first coordinates differ, the mean of the first coordinates is
/// returned. Otherwise the `Γ_Q` point at the common first coordinate is used
/// if it separates, else the coordinatewise mean. For `hi = ∞` the result is
/// `first(lo) + 1`.
pub fn value_between(lo: &GroupValue, hi: &GroupValue) -> Result<GroupValue> {
    if lo >= hi {
        return Err(Error::Precondition(format!("no value strictly between {lo} and {hi}")));
    }
    let lo = lo.finite().expect("lo < hi forces a finite lower value");
    let out = match hi {
        GroupValue::Infinity => LexValue::rational(lo.first() + Rational::one()),
        GroupValue::Finite(hi) => {
            if lo.first() != hi.first() {
                LexValue::rational((lo.first() + hi.first()) / Rational::from_integer(2.into()))
            } else {
                let anchor = LexValue::rational(lo.first().clone());
                if lo < &anchor && &anchor < hi {
                    anchor
                } else {
                    lo.midpoint(hi)
                }
            }
        }
    };
    Ok(GroupValue::Finite(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[(i64, i64)]) -> GroupValue {
        GroupValue::from_rats(c)
    }

    #[test]
    fn comparison_examples() {
        assert_eq!(gv_cmp(&v(&[(0, 1), (1, 1)]), &v(&[(1, 1), (0, 1)])), Ordering::Less);
        assert_eq!(gv_cmp(&v(&[(1, 1), (-1, 1)]), &v(&[(1, 1), (0, 1)])), Ordering::Less);
        assert_eq!(gv_cmp(&GroupValue::int(5), &GroupValue::Infinity), Ordering::Less);
    }

    #[test]
    fn padding_makes_ranks_compatible() {
        assert_eq!(GroupValue::int(1), v(&[(1, 1), (0, 1)]));
        assert!(GroupValue::int(1) < v(&[(1, 1), (1, 1)]));
        assert_eq!(&GroupValue::int(1) + &v(&[(0, 1), (1, 1)]), v(&[(1, 1), (1, 1)]));
    }

    #[test]
    fn addition_examples() {
        assert_eq!(gv_add(&v(&[(1, 1), (0, 1)]), &v(&[(0, 1), (1, 1)])), v(&[(1, 1), (1, 1)]));
        assert_eq!(gv_add(&v(&[(3, 2)]), &GroupValue::Infinity), GroupValue::Infinity);
        assert_eq!(gv_add(&v(&[(1, 1), (-1, 1)]), &v(&[(1, 1), (-1, 1)])), v(&[(2, 1), (-2, 1)]));
    }

    #[test]
    fn separate_examples() {
        let (u, w) = separate(&GroupValue::int(0), &GroupValue::int(1)).unwrap();
        assert_eq!(u, Interval::below(LexValue::new(vec![rat(1, 2)])));
        assert_eq!(w, Interval::above_finite(LexValue::new(vec![rat(1, 2)])));

        let (u, w) = separate(&v(&[(1, 1), (-1, 1)]), &v(&[(1, 1), (0, 1)])).unwrap();
        let mid = LexValue::new(vec![rat(1, 1), rat(-1, 2)]);
        assert_eq!(u, Interval::below(mid.clone()));
        assert_eq!(w, Interval::above_finite(mid));

        let (u, w) = separate(&GroupValue::int(2), &GroupValue::Infinity).unwrap();
        assert_eq!(u, Interval::below(LexValue::from_ints(&[3])));
        assert_eq!(w, Interval::AboveWithInfinity(LexValue::from_ints(&[3])));
        assert!(u.entirely_below(&w));
        assert!(w.contains(&GroupValue::Infinity));

        assert!(separate(&GroupValue::int(1), &GroupValue::int(1)).is_err());
        assert!(separate(&GroupValue::Infinity, &GroupValue::Infinity).is_err());
    }

    #[test]
    fn sum_preimage_examples() {
        let u = Interval::bounded(LexValue::new(vec![rat(3, 2)]), LexValue::new(vec![rat(5, 2)])).unwrap();
        let (a, b) = sum_preimage(&GroupValue::int(1), &GroupValue::int(1), &u).unwrap();
        let expect = Interval::bounded(LexValue::new(vec![rat(3, 4)]), LexValue::new(vec![rat(5, 4)])).unwrap();
        assert_eq!(a, expect);
        assert_eq!(b, expect);

        let u = Interval::AboveWithInfinity(LexValue::from_ints(&[4]));
        let (a, b) = sum_preimage(&GroupValue::Infinity, &GroupValue::int(0), &u).unwrap();
        assert_eq!(a, Interval::AboveWithInfinity(LexValue::from_ints(&[5])));
        assert_eq!(b, Interval::AboveWithInfinity(LexValue::from_ints(&[-1])));

        let u = Interval::AboveWithInfinity(LexValue::from_ints(&[7]));
        let (a, b) = sum_preimage(&GroupValue::Infinity, &GroupValue::Infinity, &u).unwrap();
        assert_eq!(a, Interval::AboveWithInfinity(LexValue::from_ints(&[7])));
        assert_eq!(b, Interval::AboveWithInfinity(LexValue::from_ints(&[0])));
    }

    #[test]
    fn sum_preimage_rejects_outside_target() {
        let u = Interval::bounded(LexValue::from_ints(&[0]), LexValue::from_ints(&[1])).unwrap();
        assert!(sum_preimage(&GroupValue::int(1), &GroupValue::int(1), &u).is_err());
    }

    #[test]
    fn empty_interval_is_an_error() {
        assert!(Interval::bounded(LexValue::from_ints(&[1]), LexValue::from_ints(&[1])).is_err());
        assert!(Interval::bounded(LexValue::from_ints(&[2]), LexValue::from_ints(&[1])).is_err());
    }

    #[test]
    fn bounded_intervals_exclude_infinity() {
        let i = Interval::above_finite(LexValue::zero());
        assert!(!i.contains(&GroupValue::Infinity));
        assert!(i.contains(&GroupValue::int(10)));
    }

    #[test]
    fn value_between_prefers_rationals() {
        assert_eq!(value_between(&GroupValue::int(0), &GroupValue::int(1)).unwrap(), GroupValue::rational(rat(1, 2)));
        assert_eq!(value_between(&GroupValue::int(1), &GroupValue::Infinity).unwrap(), GroupValue::int(2));
        assert_eq!(
            value_between(&v(&[(1, 1), (-1, 1)]), &v(&[(1, 1), (1, 1)])).unwrap(),
            GroupValue::int(1)
        );
        assert_eq!(
            value_between(&v(&[(1, 1), (1, 1)]), &v(&[(1, 1), (3, 1)])).unwrap(),
            v(&[(1, 1), (2, 1)])
        );
    }

    #[test]
    fn text_round_trip() {
        for s in ["(3/2,-1)", "inf", "(0)", "(-7/3,0,1)"] {
            assert_eq!(GroupValue::parse(s).unwrap().to_string(), s);
        }
        for s in ["open(-inf, (1/2))", "open((1/2), +inf)", "above((2))", "open((1), (3/2,1))"] {
            assert_eq!(Interval::parse(s).unwrap().to_string(), s);
        }
        assert!(GroupValue::parse("(1,").is_err());
        assert!(Interval::parse("open((2), (1))").is_err());
    }
}
