use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use tiltlab_core::{format_rational, parse_rational, QuadValue, Rational};

const BITS: u32 = 256;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-400i64..=400, 1i64..=60).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn quad() -> impl Strategy<Value = QuadValue> {
    (small_rational(), small_rational(), 0u32..=500)
        .prop_map(|(q, s, d)| QuadValue::new(q, s, BigInt::from(d)).unwrap())
}

/// `⌊x·2^BITS⌋` up to an additive error below `2 + |s|`.
fn fixed_point(x: &QuadValue) -> BigInt {
    let scale = BigInt::from(1) << BITS;
    let q = (x.q() * Rational::from_integer(scale.clone())).floor().to_integer();
    let root = (x.d() * &scale * &scale).sqrt();
    let s = (x.s() * Rational::from_integer(root)).floor().to_integer();
    q + s
}

fn margin(a: &QuadValue, b: &QuadValue) -> BigInt {
    let bound = |x: &QuadValue| x.s().abs().ceil().to_integer();
    BigInt::from(6) + bound(a) + bound(b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn comparison_matches_fixed_point(a in quad(), b in quad()) {
        let diff = fixed_point(&a) - fixed_point(&b);
        let m = margin(&a, &b);
        let expected = if diff > m {
            Ordering::Greater
        } else if diff < -m {
            Ordering::Less
        } else {
            // Heights this small cannot be 2^-240 apart without being equal.
            Ordering::Equal
        };
        prop_assert_eq!(a.cmp(&b), expected);
    }

    #[test]
    fn sign_is_consistent_with_negation(a in quad()) {
        prop_assert_eq!((-&a).signum(), a.signum().reverse());
        prop_assert_eq!(a.is_zero(), a.signum() == Ordering::Equal);
    }

    #[test]
    fn sqrt_squares_back(n in 0i64..=5000, d in 1i64..=300) {
        let x = Rational::new(n.into(), d.into());
        let root = QuadValue::sqrt(&x).unwrap();
        prop_assert_eq!(root.square(), QuadValue::from(x));
        prop_assert!(root.signum() != Ordering::Less);
    }

    #[test]
    fn shared_radical_field_laws(q1 in small_rational(), s1 in small_rational(),
                                 q2 in small_rational(), s2 in small_rational(), d in 2u32..=200) {
        let a = QuadValue::new(q1, s1, d.into()).unwrap();
        let b = QuadValue::new(q2, s2, d.into()).unwrap();
        prop_assert_eq!(a.try_add(&b).unwrap().try_sub(&b).unwrap(), a.clone());
        if !b.is_zero() {
            prop_assert_eq!(a.try_mul(&b).unwrap().try_div(&b).unwrap(), a.clone());
        }
        let sum_sign = a.try_add(&b).unwrap().signum();
        prop_assert_eq!(a.cmp(&-b), sum_sign);
    }

    #[test]
    fn floor_brackets_the_value(a in quad()) {
        let k = a.floor();
        prop_assert!(QuadValue::from(Rational::from_integer(k.clone())) <= a);
        prop_assert!(QuadValue::from(Rational::from_integer(k.clone() + 1)) > a);
        prop_assert_eq!(a.next_integer_above(), k + 1);
        let c = a.ceil();
        prop_assert!(QuadValue::from(Rational::from_integer(c.clone())) >= a);
        prop_assert!(QuadValue::from(Rational::from_integer(c - 1)) < a);
    }

    #[test]
    fn canonical_radicand_is_square_free(q in small_rational(), s in small_rational(), d in 0u32..=100_000) {
        let a = QuadValue::new(q, s, d.into()).unwrap();
        if a.is_rational() {
            prop_assert!(a.d().is_zero());
        } else {
            let rad = a.d().clone();
            prop_assert!(rad > BigInt::from(1));
            let mut p = BigInt::from(2);
            while &p * &p <= rad {
                prop_assert!(!(&rad % (&p * &p)).is_zero());
                p += 1;
            }
        }
    }

    #[test]
    fn rational_text_round_trip(r in small_rational()) {
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }

    #[test]
    fn quad_json_round_trip(a in quad()) {
        let text = serde_json::to_string(&a).unwrap();
        let back: QuadValue = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, a);
    }
}

#[test]
fn large_radicands_split_exactly() {
    // 2^2 · 3^4 · 1000003 · 1000033^2 · 10^24 is past the u128 path.
    let radicand = BigInt::from(4u64 * 81)
        * BigInt::from(1_000_003u64)
        * BigInt::from(1_000_033u64).pow(2)
        * BigInt::from(10u64).pow(24);
    let value = QuadValue::new(Rational::zero(), Rational::from_integer(1.into()), radicand).unwrap();
    assert_eq!(value.d(), &BigInt::from(1_000_003u64));
    let factor = BigInt::from(18u64 * 1_000_033) * BigInt::from(10u64).pow(12);
    assert_eq!(value.s(), &Rational::from_integer(factor));
}
