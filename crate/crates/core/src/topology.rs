//! Executable topology: spectrum membership and density witnesses, finite
//! poset harnesses for the weak tree and Scott topologies, and certificates
//! separating a non-valuation from the closed set of valuations.

use std::cell::OnceCell;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, ParseError, Result};
use crate::poly::{base_val, parse_poly, Poly};
use crate::text::{parse_all, Cursor, PResult};
use crate::tree::{compare, rooted_le, same_class, strict_between, Verdict};
use crate::valuation::{Classification, Evaluable, ValuationChain};
use crate::value::{parse_group_value, parse_interval, separate, sum_preimage, GroupValue, Interval, LexValue};

/// Printed with every finite Scott check.
pub const SCOTT_CAVEAT: &str = "finite poset: every directed subset has a maximum, so Scott-open coincides \
with upper set here; the separation of the Scott and weak topologies needs infinite, densely ordered trees";

/// `[ν] ∈ U(f, g)`, i.e. `ν(f) ≥ ν(g) ≠ ∞`.
pub fn spectrum_member(nu: &dyn Evaluable, f: &Poly, g: &Poly) -> Result<bool> {
    let vg = nu.try_eval(g)?;
    Ok(!vg.is_infinite() && nu.try_eval(f)? >= vg)
}

/// A valuation on `K[h]` for a fresh transcendental `h = f/g`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuxWitness {
    /// The valuation on `K[h]`, written with `x` in the place of `h`.
    pub valuation: String,
    pub value_of_h: String,
    pub classification: Classification,
    pub reason: &'static str,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Density {
    /// Both witnesses satisfy `ν'(h) ≥ 0`; extending them to `K(x)` is not constructive.
    Witnesses {
        h: String,
        value_transcendental: AuxWitness,
        residue_transcendental: AuxWitness,
        extension_note: &'static str,
    },
    /// `f = a·g` with `v(a) ≥ 0`.
    Everything { ratio: String },
    /// `f = a·g` with `v(a) < 0`.
    Empty { ratio: String },
}

/// Valuations of each kind in `U(f, g)`, realised on the auxiliary ring `K[h]`.
pub fn density_witness(p: u64, f: &Poly, g: &Poly) -> Result<Density> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::Precondition("density witnesses need nonzero f and g".into()));
    }
    if let Some(a) = f.scalar_ratio(g) {
        let ratio = a.to_string();
        return Ok(if base_val(p, &a)? >= GroupValue::zero() {
            Density::Everything { ratio }
        } else {
            Density::Empty { ratio }
        });
    }
    // (0,1) lies outside Γ_Q = Q × {0}, so it is not torsion over Γ.
    let vt = ValuationChain::monomial(p, LexValue::from_ints(&[0, 1]))?;
    let rt = ValuationChain::gauss(p)?;
    let h = Poly::x();
    for w in [&vt, &rt] {
        if w.evaluate(&h) < GroupValue::zero() {
            return Err(Error::Precondition(format!("witness {w} has a negative value at h")));
        }
    }
    Ok(Density::Witnesses {
        h: format!("({f}) / ({g})"),
        value_transcendental: AuxWitness {
            valuation: vt.to_string(),
            value_of_h: vt.evaluate(&h).to_string(),
            classification: vt.classify(),
            reason: "ν'(h) is not a torsion element over Γ",
        },
        residue_transcendental: AuxWitness {
            valuation: rt.to_string(),
            value_of_h: rt.evaluate(&h).to_string(),
            classification: rt.classify(),
            reason: "Gauss valuation in h: the residue of h is transcendental",
        },
        extension_note: "extending ν' from K(h) to K(x) is non-constructive and not performed",
    })
}

/// A finite sample of the tree with its comparison matrix.
#[derive(Clone, Debug)]
pub struct FinitePoset {
    pub elements: Vec<ValuationChain>,
    /// `order[i][j]` is the verdict of `compare(elements[i], elements[j])`.
    pub order: Vec<Vec<Verdict>>,
    pub provenance: Vec<String>,
    /// `≤_μ` matrices, filled on first use per root.
    rooted: Vec<OnceCell<Vec<Vec<bool>>>>,
}

impl FinitePoset {
    /// Computes the order matrix and checks the partial-order and tree axioms.
    pub fn new(elements: Vec<ValuationChain>, provenance: Vec<String>) -> Result<FinitePoset> {
        let n = elements.len();
        let mut order = vec![vec![Verdict::Eq; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let v = compare(&elements[i], &elements[j])?.verdict;
                order[i][j] = v;
                order[j][i] = match v {
                    Verdict::Lt => Verdict::Gt,
                    Verdict::Gt => Verdict::Lt,
                    other => other,
                };
            }
        }
        let rooted = vec![OnceCell::new(); n];
        let poset = FinitePoset { elements, order, provenance, rooted };
        if let Some(problem) = poset.axiom_violation() {
            return Err(Error::Precondition(problem));
        }
        Ok(poset)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `elements[i] ≤ elements[j]`.
    pub fn le(&self, i: usize, j: usize) -> bool {
        matches!(self.order[i][j], Verdict::Lt | Verdict::Eq)
    }

    fn rooted_matrix(&self, mu: usize) -> Result<&Vec<Vec<bool>>> {
        if let Some(m) = self.rooted[mu].get() {
            return Ok(m);
        }
        let n = self.len();
        let mut m = vec![vec![false; n]; n];
        for (a, row) in m.iter_mut().enumerate() {
            for (b, cell) in row.iter_mut().enumerate() {
                *cell = rooted_le(&self.elements[a], &self.elements[b], &self.elements[mu])?;
            }
        }
        Ok(self.rooted[mu].get_or_init(|| m))
    }

    fn axiom_violation(&self) -> Option<String> {
        let n = self.len();
        for i in 0..n {
            for j in 0..n {
                if i != j && self.order[i][j] == Verdict::Eq {
                    return Some(format!("elements {i} and {j} coincide"));
                }
                for k in 0..n {
                    if self.le(i, j) && self.le(j, k) && !self.le(i, k) {
                        return Some(format!("order is not transitive at ({i}, {j}, {k})"));
                    }
                    // Down-sets are chains.
                    if self.le(i, k) && self.le(j, k) && !self.le(i, j) && !self.le(j, i) {
                        return Some(format!("elements {i} and {j} below {k} are incomparable"));
                    }
                }
            }
        }
        None
    }
}

/// `[ν]_μ` restricted to the sample; `μ` itself is never in a class.
pub fn weak_class_in_sample(poset: &FinitePoset, mu: usize, nu: usize) -> Result<Vec<usize>> {
    if mu == nu {
        return Err(Error::Precondition("a class [ν]_μ needs ν ≠ μ".into()));
    }
    let mut out = Vec::new();
    for eta in 0..poset.len() {
        if eta != mu && same_class(&poset.elements[nu], &poset.elements[eta], &poset.elements[mu])? {
            out.push(eta);
        }
    }
    Ok(out)
}

/// The order used for upper-set checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PosetOrder {
    Tree,
    /// `≤_μ` for the element at this index.
    Rooted(usize),
}

fn order_le(poset: &FinitePoset, order: PosetOrder, a: usize, b: usize) -> Result<bool> {
    match order {
        PosetOrder::Tree => Ok(poset.le(a, b)),
        PosetOrder::Rooted(mu) => Ok(poset.rooted_matrix(mu)?[a][b]),
    }
}

pub fn is_upper_set(poset: &FinitePoset, set: &[usize], order: PosetOrder) -> Result<bool> {
    for &a in set {
        for b in 0..poset.len() {
            if !set.contains(&b) && order_le(poset, order, a, b)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScottCheck {
    pub upper_set: bool,
    /// Every directed subset whose join lies in the set meets the set.
    pub inaccessible: bool,
    pub scott_open: bool,
    pub caveat: &'static str,
}

/// Exhaustive over subsets, so meant for posets of at most a dozen elements.
pub fn is_scott_open_finite(poset: &FinitePoset, set: &[usize], order: PosetOrder) -> Result<ScottCheck> {
    let n = poset.len();
    if n > 16 {
        return Err(Error::Precondition(format!("exhaustive Scott check on {n} elements")));
    }
    let mut le = vec![vec![false; n]; n];
    for (a, row) in le.iter_mut().enumerate() {
        for (b, cell) in row.iter_mut().enumerate() {
            *cell = order_le(poset, order, a, b)?;
        }
    }
    let upper_set = is_upper_set(poset, set, order)?;
    let mut inaccessible = true;
    for mask in 1u32..(1 << n) {
        let d: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let directed = d.iter().all(|&a| d.iter().all(|&b| d.iter().any(|&c| le[a][c] && le[b][c])));
        if !directed {
            continue;
        }
        let uppers: Vec<usize> = (0..n).filter(|&u| d.iter().all(|&a| le[a][u])).collect();
        let join = uppers.iter().copied().find(|&u| uppers.iter().all(|&w| le[u][w]));
        if let Some(j) = join {
            if set.contains(&j) && !d.iter().any(|a| set.contains(a)) {
                inaccessible = false;
            }
        }
    }
    Ok(ScottCheck {
        upper_set,
        inaccessible,
        scott_open: upper_set && inaccessible,
        caveat: SCOTT_CAVEAT,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScottWeakReport {
    /// `ν ∈ [ν]_μ`.
    pub nu_in_class: bool,
    /// `μ ∉ [ν]_μ`.
    pub mu_outside_class: bool,
    pub nu_below_mu: bool,
    /// The separating point `η ∈ (ν, μ)`.
    pub eta: String,
    pub sample_size: usize,
    /// `[μ]_η ∩ [ν]_η = ∅` on the sample.
    pub classes_disjoint: bool,
    pub overlap: Vec<usize>,
}

impl ScottWeakReport {
    pub fn passed(&self) -> bool {
        self.nu_in_class && self.mu_outside_class && self.nu_below_mu && self.classes_disjoint
    }
}

/// For `ν < μ`: `[ν]_μ` contains `ν` but not the larger `μ`, so it is not an
/// upper set; an `η` strictly between separates `μ` and `ν` by disjoint classes.
pub fn scott_weak_witness(mu: &ValuationChain, nu: &ValuationChain, sample: &[ValuationChain]) -> Result<ScottWeakReport> {
    if compare(nu, mu)?.verdict != Verdict::Lt {
        return Err(Error::Precondition("scott_weak_witness needs ν < μ".into()));
    }
    let nu_in_class = same_class(nu, nu, mu)?;
    let mu_outside_class = true;
    let eta = strict_between(nu, mu)?.eta;
    let mut overlap = Vec::new();
    let mut sample_size = 0;
    for (i, s) in sample.iter().enumerate() {
        if compare(s, &eta)?.verdict == Verdict::Eq {
            continue;
        }
        sample_size += 1;
        if same_class(mu, s, &eta)? && same_class(nu, s, &eta)? {
            overlap.push(i);
        }
    }
    Ok(ScottWeakReport {
        nu_in_class,
        mu_outside_class,
        nu_below_mu: true,
        eta: eta.to_string(),
        sample_size,
        classes_disjoint: overlap.is_empty(),
        overlap,
    })
}

/// A finite partial map `K[x] → Λ_∞`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    entries: Vec<(Poly, GroupValue)>,
}

impl Table {
    pub fn new() -> Table {
        Table::default()
    }

    /// Inserts or replaces the entry for `f`.
    pub fn insert(&mut self, f: Poly, value: GroupValue) {
        match self.entries.iter_mut().find(|(g, _)| *g == f) {
            Some(e) => e.1 = value,
            None => self.entries.push((f, value)),
        }
    }

    pub fn get(&self, f: &Poly) -> Option<&GroupValue> {
        self.entries.iter().find(|(g, _)| g == f).map(|(_, v)| v)
    }

    pub fn entries(&self) -> &[(Poly, GroupValue)] {
        &self.entries
    }

    /// The restriction of a valuation to the given polynomials.
    pub fn from_valuation(nu: &dyn Evaluable, polys: &[Poly]) -> Result<Table> {
        let mut t = Table::new();
        for f in polys {
            t.insert(f.clone(), nu.try_eval(f)?);
        }
        Ok(t)
    }

    pub fn parse(src: &str) -> PResult<Table> {
        parse_all(src, parse_table)
    }
}

impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "tab {{")?;
        for (i, (g, v)) in self.entries.iter().enumerate() {
            write!(f, "{} ({g}) = {v}", if i == 0 { "" } else { ";" })?;
        }
        write!(f, " }}")
    }
}

fn parse_table(cur: &mut Cursor<'_>) -> PResult<Table> {
    cur.expect_keyword("tab")?;
    cur.expect('{')?;
    let mut t = Table::new();
    while cur.peek() != Some('}') {
        if !t.entries.is_empty() {
            cur.expect(';')?;
        }
        cur.skip_ws();
        let at = cur.pos();
        cur.expect('(')?;
        let f = parse_poly(cur)?;
        cur.expect(')')?;
        cur.expect('=')?;
        let v = parse_group_value(cur)?;
        if t.get(&f).is_some() {
            return Err(ParseError::new(at, format!("duplicate entry for {f}")));
        }
        t.entries.push((f, v));
    }
    cur.expect('}')?;
    Ok(t)
}

/// The branch of the closedness argument that produced a certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CertAxiom {
    V1,
    V2,
    V3,
    /// A constant whose value differs from its base valuation.
    #[serde(rename = "restriction")]
    Restriction,
}

impl fmt::Display for CertAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertAxiom::V1 => "V1",
            CertAxiom::V2 => "V2",
            CertAxiom::V3 => "V3",
            CertAxiom::Restriction => "restriction",
        })
    }
}

/// An open set of `Λ_∞^{K[x]}` containing the table and no valuation,
/// given by finitely many projection constraints.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub axiom: CertAxiom,
    pub constraints: Vec<(Poly, Interval)>,
    pub narrative: String,
}

impl Certificate {
    pub fn parse(src: &str) -> PResult<Certificate> {
        parse_all(src, parse_certificate)
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cert {{ axiom: {}, constraints: [", self.axiom)?;
        for (i, (g, w)) in self.constraints.iter().enumerate() {
            write!(f, "{} ({g}) in {w}", if i == 0 { "" } else { ";" })?;
        }
        write!(f, " ], narrative: \"{}\" }}", self.narrative)
    }
}

fn parse_certificate(cur: &mut Cursor<'_>) -> PResult<Certificate> {
    cur.expect_keyword("cert")?;
    cur.expect('{')?;
    cur.expect_keyword("axiom")?;
    cur.expect(':')?;
    cur.skip_ws();
    let at = cur.pos();
    let axiom = match cur.ident()? {
        "V1" => CertAxiom::V1,
        "V2" => CertAxiom::V2,
        "V3" => CertAxiom::V3,
        "restriction" => CertAxiom::Restriction,
        other => return Err(ParseError::new(at, format!("unknown axiom '{other}'"))),
    };
    cur.expect(',')?;
    cur.expect_keyword("constraints")?;
    cur.expect(':')?;
    cur.expect('[')?;
    let mut constraints = Vec::new();
    while cur.peek() != Some(']') {
        if !constraints.is_empty() {
            cur.expect(';')?;
        }
        cur.expect('(')?;
        let g = parse_poly(cur)?;
        cur.expect(')')?;
        cur.expect_keyword("in")?;
        constraints.push((g, parse_interval(cur)?));
    }
    cur.expect(']')?;
    cur.expect(',')?;
    cur.expect_keyword("narrative")?;
    cur.expect(':')?;
    let narrative = cur.quoted()?.to_string();
    cur.expect('}')?;
    Ok(Certificate { axiom, constraints, narrative })
}

/// What a certificate is checked against.
#[derive(Clone, Copy)]
pub enum Subject<'a> {
    Table(&'a Table),
    Valuation(&'a dyn Evaluable),
}

/// True iff the subject satisfies every constraint; a table lacking an entry fails.
pub fn certificate_check(c: &Certificate, subject: Subject<'_>) -> Result<bool> {
    for (g, w) in &c.constraints {
        let value = match subject {
            Subject::Table(t) => match t.get(g) {
                Some(v) => v.clone(),
                None => return Ok(false),
            },
            Subject::Valuation(nu) => nu.try_eval(g)?,
        };
        if !w.contains(&value) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The side of `separate(a, b)` (for `a ≠ b`) containing `a`, and the one containing `b`.
fn split(a: &GroupValue, b: &GroupValue) -> Result<(Interval, Interval)> {
    if a < b {
        separate(a, b)
    } else {
        let (lo, hi) = separate(b, a)?;
        Ok((hi, lo))
    }
}

/// Disjoint windows around `s ≠ t`: radius half the gap around `s` and a
/// quarter of the gap around `t`; an infinite value gets the
/// `∞`-neighbourhood beyond the finite one plus one.
fn v1_windows(s: &GroupValue, t: &GroupValue) -> Result<(Interval, Interval)> {
    match (s, t) {
        (GroupValue::Finite(a), GroupValue::Finite(b)) => {
            let gap = if a < b { b - a } else { a - b };
            let half = gap.half();
            let quarter = half.half();
            Ok((
                Interval::bounded(a - &half, a + &half)?,
                Interval::bounded(b - &quarter, b + &quarter)?,
            ))
        }
        (GroupValue::Finite(a), GroupValue::Infinity) | (GroupValue::Infinity, GroupValue::Finite(a)) => {
            let one = LexValue::one();
            let near = Interval::bounded(a - &one, a + &one)?;
            let far = Interval::AboveWithInfinity(a + &one);
            Ok(if s.is_infinite() { (far, near) } else { (near, far) })
        }
        _ => Err(Error::Precondition("windows need distinct values".into())),
    }
}

/// Scans the table in the order V3, restriction, V1, V2 and builds the
/// certificate for the first violation found; `None` when every applicable
/// check passes.
pub fn nonvaluation_certificate(p: u64, table: &Table) -> Result<Option<Certificate>> {
    let mut applicable = false;
    let one = Poly::one();
    let zero = Poly::zero();
    if let Some(v) = table.get(&one) {
        applicable = true;
        if *v != GroupValue::zero() {
            let (window, _) = split(v, &GroupValue::zero())?;
            return Ok(Some(Certificate {
                axiom: CertAxiom::V3,
                constraints: vec![(one, window)],
                narrative: format!("the value of 1 is {v}, but every valuation sends 1 to 0"),
            }));
        }
    }
    if let Some(v) = table.get(&zero) {
        applicable = true;
        if !v.is_infinite() {
            let (window, _) = split(v, &GroupValue::Infinity)?;
            return Ok(Some(Certificate {
                axiom: CertAxiom::V3,
                constraints: vec![(zero, window)],
                narrative: format!("the value of 0 is {v}, but every valuation sends 0 to inf"),
            }));
        }
    }
    for (f, v) in table.entries() {
        if f.is_constant() && !f.is_zero() {
            applicable = true;
            let expected = base_val(p, &f.coeff(0))?;
            if *v != expected {
                let (window, _) = split(v, &expected)?;
                return Ok(Some(Certificate {
                    axiom: CertAxiom::Restriction,
                    constraints: vec![(f.clone(), window)],
                    narrative: format!("the constant {f} has value {v} instead of its base value {expected}"),
                }));
            }
        }
    }
    let entries = table.entries();
    let mut missing = Vec::new();
    for (i, (a, va)) in entries.iter().enumerate() {
        for (b, vb) in &entries[i..] {
            let ab = a * b;
            let Some(vab) = table.get(&ab) else {
                missing.push(ab.to_string());
                continue;
            };
            applicable = true;
            let s = va + vb;
            if *vab != s {
                let (u, w) = v1_windows(&s, vab)?;
                let (v, v2) = sum_preimage(va, vb, &u)?;
                return Ok(Some(Certificate {
                    axiom: CertAxiom::V1,
                    constraints: vec![(a.clone(), v), (b.clone(), v2), (ab.clone(), w)],
                    narrative: format!(
                        "value of ({ab}) is {vab} but the values of ({a}) and ({b}) add to {s}; \
                         sums from the first two windows stay in {u}, disjoint from the third"
                    ),
                }));
            }
        }
    }
    for (i, (a, va)) in entries.iter().enumerate() {
        for (b, vb) in &entries[i..] {
            let sum = a + b;
            let Some(vs) = table.get(&sum) else {
                missing.push(sum.to_string());
                continue;
            };
            applicable = true;
            let m = va.clone().min(vb.clone());
            if *vs < m {
                let (u, w) = separate(vs, va)?;
                let (u2, w2) = separate(vs, vb)?;
                let low = u.intersect(&u2).expect("both windows contain the value of the sum");
                return Ok(Some(Certificate {
                    axiom: CertAxiom::V2,
                    constraints: vec![(a.clone(), w), (b.clone(), w2), (sum.clone(), low)],
                    narrative: format!(
                        "value of ({sum}) is {vs}, below the minimum {m} of the values of ({a}) and ({b})"
                    ),
                }));
            }
        }
    }
    if !applicable {
        missing.sort();
        missing.dedup();
        return Err(Error::TableNotClosed(missing.join(", ")));
    }
    Ok(None)
}
