//! Univariate polynomials over `Q`, `q`-expansions and the base `p`-adic valuation.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, Integer, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::text::{parse_all, Cursor, PResult};
use crate::value::{GroupValue, Rational};

/// Coefficients lowest degree first, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn x() -> Self {
        Poly::from_ints(&[0, 1])
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    pub fn monomial(c: Rational, deg: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); deg];
        coeffs.push(c);
        Poly::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn scale(&self, k: &Rational) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn pow(&self, n: usize) -> Poly {
        let mut out = Poly::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Euclidean division by a monic divisor.
    pub fn div_rem_monic(&self, d: &Poly) -> (Poly, Poly) {
        debug_assert!(d.is_monic());
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = std::mem::take(&mut rem[k]);
            if c.is_zero() {
                continue;
            }
            for j in 0..dd {
                rem[k - dd + j] -= &c * &d.coeffs[j];
            }
            quot[k - dd] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// True when `self = a·other` for a scalar `a`, which is returned.
    pub fn scalar_ratio(&self, other: &Poly) -> Option<Rational> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Rational::zero());
        }
        if self.degree() != other.degree() {
            return None;
        }
        let a = self.leading()? / other.leading()?;
        (other.scale(&a) == *self).then_some(a)
    }

    pub fn parse(src: &str) -> PResult<Poly> {
        parse_all(src, parse_poly)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let var = match deg {
                0 => String::new(),
                1 => "x".to_string(),
                d => format!("x^{d}"),
            };
            if deg == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{mag}*{var}")?;
            }
        }
        Ok(())
    }
}

pub(crate) fn parse_poly(cur: &mut Cursor<'_>) -> PResult<Poly> {
    let mut acc = if cur.eat('-') {
        -&parse_term(cur)?
    } else {
        parse_term(cur)?
    };
    loop {
        if cur.eat('+') {
            acc = &acc + &parse_term(cur)?;
        } else if cur.eat('-') {
            acc = &acc - &parse_term(cur)?;
        } else {
            return Ok(acc);
        }
    }
}

fn parse_term(cur: &mut Cursor<'_>) -> PResult<Poly> {
    let mut acc = parse_factor(cur)?;
    while cur.eat('*') {
        acc = &acc * &parse_factor(cur)?;
    }
    Ok(acc)
}

fn parse_factor(cur: &mut Cursor<'_>) -> PResult<Poly> {
    let base = match cur.peek() {
        Some('(') => {
            cur.bump();
            let p = parse_poly(cur)?;
            cur.expect(')')?;
            p
        }
        Some('x') => {
            cur.expect_keyword("x")?;
            Poly::x()
        }
        Some('-') => {
            cur.bump();
            return Ok(-&parse_factor(cur)?);
        }
        Some(c) if c.is_ascii_digit() => Poly::constant(cur.rational()?),
        Some(c) => return Err(cur.error(format!("unexpected '{c}' in polynomial"))),
        None => return Err(cur.error("unexpected end of polynomial")),
    };
    if cur.eat('^') {
        let e = cur.usize()?;
        Ok(base.pow(e))
    } else {
        Ok(base)
    }
}

/// The unique `q`-expansion `[f₀,…,f_r]` with `deg f_j < deg q` and `Σ f_j q^j = f`.
pub fn q_expansion(f: &Poly, q: &Poly) -> Result<Vec<Poly>> {
    if !q.is_monic() || q.is_constant() {
        return Err(Error::BadKey(q.to_string()));
    }
    Ok(expand_unchecked(f, q))
}

pub(crate) fn expand_unchecked(f: &Poly, q: &Poly) -> Vec<Poly> {
    let mut out = Vec::new();
    let mut rest = f.clone();
    while !rest.is_zero() {
        let (quot, rem) = rest.div_rem_monic(q);
        out.push(rem);
        rest = quot;
    }
    if out.is_empty() {
        out.push(Poly::zero());
    }
    out
}

/// Rebuilds `Σ f_j q^j`.
pub fn recompose(expansion: &[Poly], q: &Poly) -> Poly {
    expansion
        .iter()
        .rev()
        .fold(Poly::zero(), |acc, fj| &(&acc * q) + fj)
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The `p`-adic valuation on `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PAdic {
    p: u64,
}

impl PAdic {
    pub fn new(p: u64) -> Result<PAdic> {
        if is_prime(p) {
            Ok(PAdic { p })
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn int_valuation(&self, n: &BigInt) -> i64 {
        let p = BigInt::from(self.p);
        let mut n = n.abs();
        let mut k = 0;
        loop {
            let (q, r) = n.div_rem(&p);
            if !r.is_zero() {
                return k;
            }
            n = q;
            k += 1;
        }
    }

    /// `v_p(a)` as an integer, `None` for zero.
    pub fn order(&self, a: &Rational) -> Option<i64> {
        if a.is_zero() {
            None
        } else {
            Some(self.int_valuation(a.numer()) - self.int_valuation(a.denom()))
        }
    }

    pub fn value(&self, a: &Rational) -> GroupValue {
        match self.order(a) {
            None => GroupValue::Infinity,
            Some(k) => GroupValue::int(k),
        }
    }

    /// `p^k` as a rational.
    pub fn power(&self, k: i64) -> Rational {
        let p = Rational::from_integer(self.p.into());
        num::pow::Pow::pow(p, k as i32)
    }
}

pub fn base_val(p: u64, a: &Rational) -> Result<GroupValue> {
    Ok(PAdic::new(p)?.value(a))
}
