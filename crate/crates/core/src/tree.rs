//! The tree order on valuations: comparison, meets, intervals, the classes
//! `[ν]_μ`, tangent directions and dense betweenness.
//!
//! Comparison is exact. A chain `μ = [γ₀; (φ_i, γ_i)]` is the least valuation
//! extending `v` with `μ(x) ≥ γ₀` and `μ(φ_i) ≥ γ_i` for every step, hence
//! `μ ≤ ν` iff `ν(x) ≥ γ₀` and `ν(φ_i) ≥ γ_i` for all `i`. The key
//! polynomials of the chains are therefore complete witnesses.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::valuation::{Evaluable, ValuationChain};
use crate::value::{value_between, GroupValue};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Lt,
    Gt,
    Eq,
    Incomparable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Lt => "lt",
            Verdict::Gt => "gt",
            Verdict::Eq => "eq",
            Verdict::Incomparable => "incomparable",
        })
    }
}

/// Verdict plus witnesses: `rises` has `μ(f) < ν(f)`, `drops` has `μ(f) > ν(f)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub verdict: Verdict,
    pub rises: Option<Poly>,
    pub drops: Option<Poly>,
}

impl Comparison {
    pub fn witnesses(&self) -> Vec<&Poly> {
        self.rises.iter().chain(self.drops.iter()).collect()
    }
}

fn same_prime(a: &dyn Evaluable, b: &dyn Evaluable) -> Result<()> {
    if a.prime() == b.prime() {
        Ok(())
    } else {
        Err(Error::PrimeMismatch(a.prime(), b.prime()))
    }
}

/// `None` when `μ ≤ ν`; otherwise a key polynomial `f` of `μ` with `μ(f) > ν(f)`.
pub fn le_witness(mu: &ValuationChain, nu: &dyn Evaluable) -> Result<Option<Poly>> {
    same_prime(mu, nu)?;
    let x = Poly::x();
    if GroupValue::Finite(mu.root().clone()) > nu.try_eval(&x)? {
        return Ok(Some(x));
    }
    for step in mu.steps() {
        if step.value > nu.try_eval(&step.key)? {
            return Ok(Some(step.key.clone()));
        }
    }
    Ok(None)
}

pub fn le(mu: &ValuationChain, nu: &dyn Evaluable) -> Result<bool> {
    Ok(le_witness(mu, nu)?.is_none())
}

pub fn lt(mu: &ValuationChain, nu: &ValuationChain) -> Result<bool> {
    Ok(compare(mu, nu)?.verdict == Verdict::Lt)
}

pub fn compare(mu: &ValuationChain, nu: &ValuationChain) -> Result<Comparison> {
    let drops = le_witness(mu, nu)?;
    let rises = le_witness(nu, mu)?;
    let verdict = match (&drops, &rises) {
        (None, None) => Verdict::Eq,
        (None, Some(_)) => Verdict::Lt,
        (Some(_), None) => Verdict::Gt,
        (Some(_), Some(_)) => Verdict::Incomparable,
    };
    Ok(Comparison { verdict, rises, drops })
}

/// `μ ∧ ν` for `ν` any valuation (a chain or a limit).
///
/// Walks the chain of `μ`: the first step `(φ, γ)` with `γ > ν(φ)` is cut
/// back to `ν(φ)`, or dropped when that does not raise `φ` at all.
pub fn meet_with(mu: &ValuationChain, nu: &dyn Evaluable) -> Result<ValuationChain> {
    same_prime(mu, nu)?;
    let nx = nu.try_eval(&Poly::x())?;
    let rank = mu.rank().max(nx.rank());
    if GroupValue::Finite(mu.root().clone()) > nx {
        let root = nx.finite().expect("below a finite value").clone();
        return Ok(ValuationChain::monomial(mu.prime(), root)?.with_rank(rank));
    }
    for (i, step) in mu.steps().iter().enumerate() {
        let t = nu.try_eval(&step.key)?;
        if step.value <= t {
            continue;
        }
        let prefix = mu.truncated(i);
        return if t > prefix.evaluate(&step.key) {
            Ok(prefix.augment(&step.key, &t)?.with_rank(rank).assume_valid())
        } else {
            Ok(prefix.with_rank(rank))
        };
    }
    Ok(mu.clone())
}

pub fn meet(mu: &ValuationChain, nu: &ValuationChain) -> Result<ValuationChain> {
    let m = meet_with(mu, nu)?;
    Ok(if mu.is_validated() && nu.is_validated() { m.assume_valid() } else { m })
}

/// Checks `m ≤ μ`, `m ≤ ν`, and that no candidate common lower bound lies strictly above `m`.
pub fn verify_meet(
    mu: &ValuationChain,
    nu: &ValuationChain,
    m: &ValuationChain,
    candidates: &[ValuationChain],
) -> Result<bool> {
    if !le(m, mu)? || !le(m, nu)? {
        return Ok(false);
    }
    for c in candidates {
        if le(c, mu)? && le(c, nu)? && !le(c, m)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `η ∈ [μ, ν]`, i.e. `μ∧ν ≤ η ≤ μ` or `μ∧ν ≤ η ≤ ν`.
pub fn in_interval(eta: &ValuationChain, mu: &ValuationChain, nu: &ValuationChain) -> Result<bool> {
    let m = meet(mu, nu)?;
    Ok(le(&m, eta)? && (le(eta, mu)? || le(eta, nu)?))
}

/// `ν ∼_μ η`, i.e. `μ ∉ [ν, η]`.
pub fn same_class(nu: &ValuationChain, eta: &ValuationChain, mu: &ValuationChain) -> Result<bool> {
    for (name, c) in [("ν", nu), ("η", eta)] {
        if compare(c, mu)?.verdict == Verdict::Eq {
            return Err(Error::Precondition(format!("{name} must differ from μ = {mu}")));
        }
    }
    Ok(!in_interval(mu, nu, eta)?)
}

/// The rooted order: `a ≤_μ b` iff `a ∈ [μ, b]`.
pub fn rooted_le(a: &ValuationChain, b: &ValuationChain, mu: &ValuationChain) -> Result<bool> {
    in_interval(a, mu, b)
}

/// A monic polynomial of minimal degree with `μ(φ) < ν(φ)`, for `μ < ν`.
///
/// Walks the chain of `ν`: the first constraint of `ν` that `μ` does not
/// meet is its witness, and every polynomial of smaller degree already has
/// equal values under both.
pub fn tangent_direction(mu: &ValuationChain, nu: &ValuationChain) -> Result<Poly> {
    let c = compare(mu, nu)?;
    if c.verdict != Verdict::Lt {
        return Err(Error::Precondition(format!(
            "tangent direction needs μ < ν, got {}",
            c.verdict
        )));
    }
    Ok(c.rises.expect("a strict inequality has a witness"))
}

/// `φ` and `ψ` define the same tangent direction at `μ`: equal degree and
/// `μ(φ − ψ) > μ(φ)`.
pub fn same_tangent(mu: &ValuationChain, phi: &Poly, psi: &Poly) -> bool {
    phi.degree() == psi.degree() && mu.evaluate(&(phi - psi)) > mu.evaluate(phi)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Between {
    pub eta: ValuationChain,
    /// Polynomials certifying `μ < η` and `η < ν`.
    pub witnesses: Vec<Poly>,
}

/// An element of the open interval `(μ, ν)`.
///
/// For `μ < ν` this is `[μ; φ, γ]` with `φ` the tangent direction and `γ`
/// strictly between `μ(φ)` and `ν(φ)`. For incomparable inputs it is the meet.
pub fn strict_between(mu: &ValuationChain, nu: &ValuationChain) -> Result<Between> {
    let c = compare(mu, nu)?;
    let eta = match c.verdict {
        Verdict::Lt => {
            let phi = c.rises.clone().expect("strict inequality has a witness");
            let gamma = value_between(&mu.evaluate(&phi), &nu.evaluate(&phi))?;
            // Raising the value of μ's own last key keeps the chain short.
            let base = match mu.steps().last() {
                Some(s) if s.key == phi => mu.truncated(mu.depth() - 1),
                _ => mu.clone(),
            };
            base.augment(&phi, &gamma)?.with_rank(nu.rank().max(mu.rank())).assume_valid()
        }
        Verdict::Incomparable => meet(mu, nu)?,
        v => {
            return Err(Error::Precondition(format!(
                "strict_between needs μ < ν or incomparable inputs, got {v}"
            )))
        }
    };
    let lower = compare(mu, &eta)?;
    let upper = compare(&eta, nu)?;
    let ok = |cmp: &Comparison, inverted: bool| {
        matches!((cmp.verdict, inverted), (Verdict::Lt, false) | (Verdict::Gt, true))
    };
    let incomparable = c.verdict == Verdict::Incomparable;
    if !ok(&lower, incomparable) || !ok(&upper, false) {
        return Err(Error::Precondition(format!(
            "constructed {eta} is not strictly between the inputs"
        )));
    }
    let witnesses = [&lower, &upper]
        .iter()
        .flat_map(|c| c.rises.iter().chain(c.drops.iter()).take(1))
        .cloned()
        .collect();
    Ok(Between { eta, witnesses })
}

/// The partition of a sample into classes `[ν]_μ`.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectionPartition {
    /// Indices into the sample.
    pub classes: Vec<Vec<usize>>,
    /// The class `{ρ | μ ≰ ρ}`, when the sample meets it.
    pub below_class: Option<usize>,
    /// The tangent direction of each class above `μ`.
    pub tangents: Vec<Option<Poly>>,
    /// Structural checks that failed; empty on success.
    pub violations: Vec<String>,
}

pub fn classify_directions(mu: &ValuationChain, sample: &[ValuationChain]) -> Result<DirectionPartition> {
    for s in sample {
        if compare(s, mu)?.verdict == Verdict::Eq {
            return Err(Error::Precondition(format!("μ = {mu} occurs in the sample")));
        }
    }
    let n = sample.len();
    let mut matrix = vec![vec![false; n]; n];
    for i in 0..n {
        matrix[i][i] = true;
        for j in i + 1..n {
            let s = same_class(&sample[i], &sample[j], mu)?;
            matrix[i][j] = s;
            matrix[j][i] = s;
        }
    }
    let mut violations = Vec::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, row) in matrix.iter().enumerate().take(n) {
        match classes.iter_mut().find(|c| row[c[0]]) {
            Some(c) => c.push(i),
            None => classes.push(vec![i]),
        }
    }
    for c in &classes {
        for &i in c {
            for &j in c {
                if !matrix[i][j] {
                    violations.push(format!("∼_μ is not transitive at ({i}, {j})"));
                }
            }
        }
    }
    let not_above: Vec<usize> = (0..n).filter(|&i| !le(mu, &sample[i]).unwrap_or(false)).collect();
    let mut below_class = None;
    if let Some(&first) = not_above.first() {
        let k = classes.iter().position(|c| c.contains(&first)).unwrap();
        if classes[k] != not_above {
            violations.push(format!(
                "the elements not above μ {:?} do not form one class {:?}",
                not_above, classes[k]
            ));
        }
        below_class = Some(k);
    }
    let mut tangents = Vec::new();
    for (k, c) in classes.iter().enumerate() {
        if Some(k) == below_class {
            tangents.push(None);
            continue;
        }
        let dirs = c
            .iter()
            .map(|&i| tangent_direction(mu, &sample[i]))
            .collect::<Result<Vec<_>>>()?;
        if dirs.iter().any(|d| !same_tangent(mu, &dirs[0], d)) {
            violations.push(format!("class {k} mixes tangent directions"));
        }
        tangents.push(Some(dirs[0].clone()));
    }
    for a in 0..tangents.len() {
        for b in a + 1..tangents.len() {
            if let (Some(s), Some(t)) = (&tangents[a], &tangents[b]) {
                if same_tangent(mu, s, t) {
                    violations.push(format!("classes {a} and {b} share the tangent direction {s}"));
                }
            }
        }
    }
    Ok(DirectionPartition {
        classes,
        below_class,
        tangents,
        violations,
    })
}
