use num::{BigInt, Integer, One, Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use valtree::gen::{sample_in, ChainGenerator};
use valtree::tree::le;
use valtree::value::{separate, sum_preimage};
use valtree::{compare, meet, GroupValue, Interval, LexValue, Poly, Rational, ValuationChain, Verdict};

fn rational() -> impl Strategy<Value = Rational> {
    (-24i64..=24, prop::sample::select(vec![1i64, 2, 3, 4, 8])).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn lex() -> impl Strategy<Value = LexValue> {
    prop::collection::vec(rational(), 1..=2).prop_map(LexValue::new)
}

fn group_value() -> impl Strategy<Value = GroupValue> {
    prop_oneof![6 => lex().prop_map(GroupValue::Finite), 1 => Just(GroupValue::Infinity)]
}

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec(rational(), 0..=5).prop_map(Poly::new)
}

fn chain() -> impl Strategy<Value = ValuationChain> {
    any::<u64>().prop_map(|seed| ChainGenerator::default().chain(&mut ChaCha8Rng::seed_from_u64(seed)))
}

/// 2-adic order of a nonzero integer.
fn ord2(n: &BigInt) -> i64 {
    let mut n = n.abs();
    let mut k = 0;
    while n.is_even() {
        n /= 2;
        k += 1;
    }
    k
}

fn v2(q: &Rational) -> Rational {
    Rational::from_integer((ord2(q.numer()) - ord2(q.denom())).into())
}

/// Coefficients of `f(y - a)` in `y`, by expanding each power binomially.
fn taylor_shift(f: &[Rational], a: &Rational) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); f.len()];
    for (i, c) in f.iter().enumerate() {
        let mut binom = BigInt::one();
        for (j, slot) in out.iter_mut().enumerate().take(i + 1) {
            if j > 0 {
                binom = binom * BigInt::from(i - j + 1) / BigInt::from(j);
            }
            let mut term = c * Rational::from_integer(binom.clone());
            for _ in 0..(i - j) {
                term *= -a;
            }
            *slot += term;
        }
    }
    out
}

/// `min v2(b_j) + j·γ` over the nonzero `b_j`.
fn weighted_min(coeffs: &[Rational], gamma: &Rational) -> GroupValue {
    coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| v2(c) + gamma * Rational::from_integer(j.into()))
        .min()
        .map_or(GroupValue::Infinity, GroupValue::rational)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn lex_order_is_total_and_transitive(a in lex(), b in lex(), c in lex()) {
        let trichotomy = [a < b, a == b, a > b].iter().filter(|t| **t).count();
        prop_assert_eq!(trichotomy, 1);
        if a <= b && b <= c {
            prop_assert!(a <= c);
        }
    }

    #[test]
    fn addition_is_an_ordered_monoid(a in group_value(), b in group_value(), c in group_value()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &GroupValue::zero(), a.clone());
        prop_assert_eq!(&a + &GroupValue::Infinity, GroupValue::Infinity);
        if a <= b {
            prop_assert!(&a + &c <= &b + &c);
        }
    }

    #[test]
    fn separate_orders_its_neighbourhoods(a in group_value(), b in group_value(), seed in any::<u64>()) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assume!(lo < hi);
        let (u, w) = separate(&lo, &hi).unwrap();
        prop_assert!(u.contains(&lo) && w.contains(&hi));
        prop_assert!(u.entirely_below(&w));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..16 {
            if let (Some(x), Some(y)) = (sample_in(&mut rng, &u), sample_in(&mut rng, &w)) {
                prop_assert!(x < y);
            }
        }
    }

    #[test]
    fn sum_preimage_lands_in_target(
        a in group_value(),
        b in group_value(),
        below in rational(),
        above in rational(),
        seed in any::<u64>(),
    ) {
        let sum = &a + &b;
        let margin = |q: &Rational| LexValue::rational(q.abs() + Rational::new(1.into(), 8.into()));
        let target = match &sum {
            GroupValue::Finite(s) => Interval::bounded(s - &margin(&below), s + &margin(&above)).unwrap(),
            GroupValue::Infinity => Interval::AboveWithInfinity(LexValue::rational(below)),
        };
        let (v, w) = sum_preimage(&a, &b, &target).unwrap();
        prop_assert!(v.contains(&a) && w.contains(&b));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..16 {
            if let (Some(x), Some(y)) = (sample_in(&mut rng, &v), sample_in(&mut rng, &w)) {
                prop_assert!(target.contains(&(&x + &y)), "{} + {} leaves {}", x, y, target);
            }
        }
    }

    #[test]
    fn poly_text_round_trips(f in poly()) {
        prop_assert_eq!(Poly::parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn value_text_round_trips(g in group_value()) {
        prop_assert_eq!(GroupValue::parse(&g.to_string()).unwrap(), g);
    }

    #[test]
    fn chain_text_round_trips(c in chain(), fs in prop::collection::vec(poly(), 8)) {
        let back = ValuationChain::parse(&c.to_string()).unwrap();
        prop_assert_eq!(back.to_string(), c.to_string());
        prop_assert_eq!(compare(&back, &c).unwrap().verdict, Verdict::Eq);
        for f in &fs {
            prop_assert_eq!(back.evaluate(f), c.evaluate(f));
        }
    }

    #[test]
    fn monomial_matches_termwise_minimum(root in rational(), f in poly()) {
        let mu = ValuationChain::monomial(2, LexValue::rational(root.clone())).unwrap();
        prop_assert_eq!(mu.evaluate(&f), weighted_min(f.coeffs(), &root));
    }

    #[test]
    fn shifted_key_matches_taylor_expansion(
        a in -8i64..=8,
        num in 1i64..=12,
        den in prop::sample::select(vec![1i64, 2, 3, 4]),
        f in poly(),
    ) {
        let a = Rational::from_integer(a.into());
        let gamma = Rational::new(num.into(), den.into());
        let mu = ValuationChain::gauss(2)
            .unwrap()
            .augment(&Poly::new(vec![a.clone(), Rational::one()]), &GroupValue::rational(gamma.clone()))
            .unwrap();
        prop_assert_eq!(mu.evaluate(&f), weighted_min(&taylor_shift(f.coeffs(), &a), &gamma));
    }

    #[test]
    fn meet_is_a_greatest_lower_bound(a in chain(), b in chain(), c in chain()) {
        let m = meet(&a, &b).unwrap();
        prop_assert!(le(&m, &a).unwrap() && le(&m, &b).unwrap());
        prop_assert_eq!(compare(&m, &meet(&b, &a).unwrap()).unwrap().verdict, Verdict::Eq);
        prop_assert_eq!(compare(&meet(&a, &a).unwrap(), &a).unwrap().verdict, Verdict::Eq);
        let left = meet(&m, &c).unwrap();
        let right = meet(&a, &meet(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(compare(&left, &right).unwrap().verdict, Verdict::Eq);
        if le(&c, &a).unwrap() && le(&c, &b).unwrap() {
            prop_assert!(le(&c, &m).unwrap());
        }
    }
}
