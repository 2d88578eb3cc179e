//! Seeded generators: random polynomials, pools of valid 2-adic augmentation
//! chains, and random values and intervals for the order-topology checks.
//!
//! Chains are grown only through moves that are known to produce key
//! polynomials, so every generated chain is a genuine valuation:
//!
//! * same-degree moves `φ ↦ φ + a` with `v(a) ≥ γ` and a larger value;
//! * the ramified jump `φ ↦ φ² + 2^k·u` (`u` odd) when `γ = k/2`, `k` odd;
//! * the residually inert jump `φ ↦ φ² + 2^n·φ + 2^{2n}` when `γ = n ∈ Z`,
//!   whose residual polynomial `y² + y + 1` is irreducible over `F_2`;
//! * a final infinite value, or a value off `Γ_Q` (after which only
//!   same-degree moves and the infinite value are used).
//!
//! The two degree jumps are only taken from degree-one chains.

use num::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::poly::Poly;
use crate::valuation::ValuationChain;
use crate::value::{rat, GroupValue, Interval, LexValue, Rational};

/// Coefficients are `±n/p^k` with `n ≤ 16`, occasionally scaled by a power of `p`.
pub fn random_rational(rng: &mut impl Rng, p: u64) -> Rational {
    let n: i64 = rng.gen_range(-16..=16);
    let mut q = Rational::from_integer(n.into());
    match rng.gen_range(0..6) {
        0 => q /= Rational::from_integer(p.into()),
        1 => q *= Rational::from_integer((p * p).into()),
        _ => {}
    }
    q
}

/// A random polynomial of degree at most `max_deg`; roughly one in twelve is constant.
pub fn random_poly(rng: &mut impl Rng, max_deg: usize, p: u64) -> Poly {
    let deg = if rng.gen_range(0..12) == 0 { 0 } else { rng.gen_range(0..=max_deg) };
    let mut coeffs: Vec<Rational> = (0..=deg).map(|_| random_rational(rng, p)).collect();
    if coeffs[deg].is_zero() {
        coeffs[deg] = Rational::from_integer(rng.gen_range(1..=5).into());
    }
    Poly::new(coeffs)
}

pub fn random_nonzero_poly(rng: &mut impl Rng, max_deg: usize, p: u64) -> Poly {
    loop {
        let f = random_poly(rng, max_deg, p);
        if !f.is_zero() {
            return f;
        }
    }
}

/// A random monic polynomial of degree in `1..=max_deg`.
pub fn random_monic(rng: &mut impl Rng, max_deg: usize, p: u64) -> Poly {
    let deg = rng.gen_range(1..=max_deg.max(1));
    let mut coeffs: Vec<Rational> = (0..deg).map(|_| random_rational(rng, p)).collect();
    coeffs.push(Rational::one());
    Poly::new(coeffs)
}

/// A random finite value of rank 2 with small coordinates.
pub fn random_lex(rng: &mut impl Rng) -> LexValue {
    let a = rat(rng.gen_range(-12..=12), *[1, 2, 3, 4].choose(rng).unwrap());
    let b = if rng.gen_bool(0.5) {
        Rational::zero()
    } else {
        rat(rng.gen_range(-12..=12), *[1, 2, 3, 4].choose(rng).unwrap())
    };
    LexValue::new(vec![a, b])
}

/// A random value of `Λ_∞`; about one in eight is `∞`.
pub fn random_value(rng: &mut impl Rng) -> GroupValue {
    if rng.gen_range(0..8) == 0 {
        GroupValue::Infinity
    } else {
        GroupValue::Finite(random_lex(rng))
    }
}

/// An element of the open set `u` near its boundary or interior; `None` if
/// the draw fell outside (callers simply retry).
pub fn sample_in(rng: &mut impl Rng, u: &Interval) -> Option<GroupValue> {
    if u.contains_infinity() && rng.gen_range(0..4) == 0 {
        return Some(GroupValue::Infinity);
    }
    let lo = u.lower().cloned();
    let hi = u.upper().cloned();
    let t = rat(rng.gen_range(1..64), 64);
    let point = match (lo, hi) {
        (Some(l), Some(h)) => &l + &(&h - &l).scale(&t),
        (Some(l), None) => {
            let step = LexValue::new(vec![rat(rng.gen_range(0..5), 2), rat(rng.gen_range(1..9), 1)]);
            &l + &step.scale(&t)
        }
        (None, Some(h)) => {
            let step = LexValue::new(vec![rat(rng.gen_range(0..5), 2), rat(rng.gen_range(1..9), 1)]);
            &h - &step.scale(&t)
        }
        (None, None) => random_lex(rng),
    };
    let out = GroupValue::Finite(point);
    u.contains(&out).then_some(out)
}

/// A random open set containing `g`: a bounded window, a ray, or an
/// `∞`-neighbourhood when `g = ∞`.
pub fn random_neighbourhood(rng: &mut impl Rng, g: &GroupValue) -> Interval {
    let radius = || LexValue::new(vec![rat(1, 1), Rational::zero()]);
    match g {
        GroupValue::Infinity => Interval::AboveWithInfinity(random_lex(rng)),
        GroupValue::Finite(v) => {
            let r = match rng.gen_range(0..3) {
                0 => radius(),
                1 => LexValue::new(vec![rat(rng.gen_range(1..8), 4), Rational::zero()]),
                _ => LexValue::new(vec![Rational::zero(), rat(rng.gen_range(1..8), 1)]),
            };
            match rng.gen_range(0..5) {
                0 => Interval::below(v + &r),
                1 => Interval::above_finite(v - &r),
                2 => Interval::AboveWithInfinity(v - &r),
                _ => Interval::bounded(v - &r, v + &r).expect("radius is positive"),
            }
        }
    }
}

/// Grows valid 2-adic chains of depth at most [`ChainGenerator::max_depth`].
#[derive(Clone, Debug)]
pub struct ChainGenerator {
    pub max_depth: usize,
}

impl Default for ChainGenerator {
    fn default() -> Self {
        ChainGenerator { max_depth: 3 }
    }
}

const P: u64 = 2;

fn two_pow(k: i64) -> Rational {
    num::pow::Pow::pow(rat(2, 1), k as i32)
}

fn ceil(q: &Rational) -> i64 {
    q.ceil().to_integer().to_i64().expect("small values")
}

impl ChainGenerator {
    /// A root: usually the Gauss valuation, sometimes a monomial one.
    pub fn root(&self, rng: &mut impl Rng) -> ValuationChain {
        let root = match rng.gen_range(0..6) {
            0 => LexValue::from_ints(&[1]),
            1 => LexValue::new(vec![rat(1, 2)]),
            2 => LexValue::from_ints(&[-1]),
            _ => LexValue::zero(),
        };
        ValuationChain::monomial(P, root).expect("2 is prime").with_rank(2)
    }

    /// A value strictly above `g`, in `Γ_Q` unless `vt` is set.
    fn value_above(&self, rng: &mut impl Rng, g: &LexValue, vt: bool) -> GroupValue {
        let (n, d) = *[(1, 4), (1, 2), (1, 2), (1, 1), (1, 1), (3, 2), (2, 1)].choose(rng).unwrap();
        let inc = rat(n, d);
        if !vt {
            return GroupValue::rational(g.first() + inc);
        }
        let second = rat(*[-2, -1, 1, 3].choose(rng).unwrap(), 1);
        if g.in_divisible_hull() && rng.gen_bool(0.4) {
            return GroupValue::Finite(LexValue::new(vec![g.first().clone(), second.abs()]));
        }
        if !g.in_divisible_hull() && rng.gen_bool(0.4) {
            return GroupValue::Finite(LexValue::new(vec![g.first().clone(), g.coord(1) + second.abs()]));
        }
        GroupValue::Finite(LexValue::new(vec![g.first() + inc, second]))
    }

    /// One valid augmentation step on top of `chain`, or `None` when the
    /// chain is maximal or already at full depth.
    pub fn extend(&self, rng: &mut impl Rng, chain: &ValuationChain) -> Option<ValuationChain> {
        if chain.depth() >= self.max_depth || chain.support().is_some() {
            return None;
        }
        let (phi, gamma) = chain.last_key();
        let gamma = gamma.finite()?.clone();
        let is_vt = !gamma.in_divisible_hull();
        let degree_one = phi.degree() == Some(1);
        let twice = gamma.first() * rat(2, 1);

        enum Move {
            Same,
            Ramified,
            Inert,
        }
        let mut moves = vec![Move::Same, Move::Same];
        if degree_one && !is_vt && twice.is_integer() && !gamma.first().is_integer() {
            moves.push(Move::Ramified);
        }
        if degree_one && !is_vt && gamma.first().is_integer() {
            moves.push(Move::Inert);
        }
        let (key, floor) = match moves.choose(rng).unwrap() {
            Move::Same => {
                let shift = match rng.gen_range(0..3) {
                    0 => Rational::zero(),
                    _ => {
                        let mut k = ceil(gamma.first());
                        if LexValue::from_ints(&[k]) < gamma {
                            k += 1;
                        }
                        let k = k + rng.gen_range(0..2);
                        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
                        two_pow(k) * rat(sign * *[1, 1, 3].choose(rng).unwrap(), 1)
                    }
                };
                (&phi + &Poly::constant(shift), gamma.clone())
            }
            Move::Ramified => {
                let k = twice.to_integer().to_i64().unwrap();
                let u = rat(*[1, -1, 3].choose(rng).unwrap(), 1);
                let key = &phi.pow(2) + &Poly::constant(two_pow(k) * u);
                (key, LexValue::rational(twice))
            }
            Move::Inert => {
                let n = gamma.first().to_integer().to_i64().unwrap();
                let key = &(&phi.pow(2) + &phi.scale(&two_pow(n))) + &Poly::constant(two_pow(2 * n));
                (key, LexValue::rational(twice))
            }
        };
        let value = match rng.gen_range(0..8) {
            0 => GroupValue::Infinity,
            1 | 2 => self.value_above(rng, &floor, true),
            _ if is_vt => self.value_above(rng, &floor, true),
            _ => self.value_above(rng, &floor, false),
        };
        let next = chain.augment(&key, &value).ok()?;
        Some(next.assume_valid())
    }

    /// A random chain of depth at most `max_depth`.
    pub fn chain(&self, rng: &mut impl Rng) -> ValuationChain {
        let mut c = self.root(rng);
        let depth = rng.gen_range(0..=self.max_depth);
        for _ in 0..depth {
            match self.extend(rng, &c) {
                Some(next) => c = next,
                None => break,
            }
        }
        c
    }

    /// A pool grown as a random tree: each new member extends or branches
    /// off an earlier one, so that comparable and incomparable pairs both occur.
    pub fn pool(&self, rng: &mut impl Rng, size: usize) -> Vec<ValuationChain> {
        let mut pool = vec![self.root(rng)];
        let mut guard = 0;
        while pool.len() < size && guard < size * 50 {
            guard += 1;
            let parent = pool.choose(rng).unwrap().clone();
            let parent = if rng.gen_bool(0.3) && parent.depth() > 0 {
                parent.truncated(rng.gen_range(0..parent.depth()))
            } else {
                parent
            };
            let candidate = if rng.gen_range(0..10) == 0 {
                self.chain(rng)
            } else {
                match self.extend(rng, &parent) {
                    Some(c) => c,
                    None => continue,
                }
            };
            if !pool.contains(&candidate) {
                pool.push(candidate);
            }
        }
        pool
    }

    /// A sample of chains around `mu`: its truncations, extensions of it,
    /// and branches off its truncations. Never contains `mu` itself.
    pub fn neighbourhood(&self, rng: &mut impl Rng, mu: &ValuationChain, size: usize) -> Vec<ValuationChain> {
        let mut out: Vec<ValuationChain> = Vec::new();
        let mut guard = 0;
        while out.len() < size && guard < size * 60 {
            guard += 1;
            let candidate = match rng.gen_range(0..4) {
                0 if mu.depth() > 0 => mu.truncated(rng.gen_range(0..mu.depth())),
                1 => {
                    let mut c = self.extend(rng, mu);
                    if rng.gen_bool(0.4) {
                        c = c.and_then(|c| self.extend(rng, &c));
                    }
                    match c {
                        Some(c) => c,
                        None => continue,
                    }
                }
                2 => {
                    let base = mu.truncated(rng.gen_range(0..=mu.depth()));
                    match self.extend(rng, &base) {
                        Some(c) => c,
                        None => continue,
                    }
                }
                _ => self.chain(rng),
            };
            if candidate != *mu && !out.contains(&candidate) {
                out.push(candidate);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valuation::{check_axioms, default_sample};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_chains_satisfy_the_axioms() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let generator = ChainGenerator::default();
        for _ in 0..25 {
            let c = generator.chain(&mut rng);
            let sample = default_sample(&c, 12, rng.gen());
            let report = check_axioms(&c, &sample).unwrap();
            assert!(report.passed(), "{c}: {:?}", report.violation);
        }
    }

    #[test]
    fn pool_has_requested_size_and_depth_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let pool = ChainGenerator::default().pool(&mut rng, 40);
        assert_eq!(pool.len(), 40);
        assert!(pool.iter().all(|c| c.depth() <= 3));
        assert!(pool.iter().any(|c| c.degree_sv().0 == 2));
        assert!(pool.iter().any(|c| c.support().is_some()));
    }

    #[test]
    fn samples_land_in_their_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let g = random_value(&mut rng);
            let u = random_neighbourhood(&mut rng, &g);
            assert!(u.contains(&g), "{g} ∉ {u}");
            if let Some(y) = sample_in(&mut rng, &u) {
                assert!(u.contains(&y));
            }
        }
    }
}
