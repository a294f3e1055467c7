//! Property-based tests for the nearring axioms, the text format, and
//! the predicate layer.

use nearring::predicates::{member, GeneratorBasis};
use nearring::IntPoly;
use num_bigint::BigInt;
use proptest::prelude::*;

fn small_poly() -> impl Strategy<Value = IntPoly> {
    prop::collection::vec(-9i64..=9, 0..=5)
        .prop_map(|cs| IntPoly::new(cs.into_iter().map(BigInt::from).collect()))
}

fn any_basis() -> impl Strategy<Value = GeneratorBasis> {
    (any::<bool>(), any::<bool>(), any::<bool>(), any::<bool>())
        .prop_map(|(a, b, c, d)| GeneratorBasis::new(a, b, c, d))
}

proptest! {
    #[test]
    fn render_parse_round_trip(p in small_poly()) {
        let text = p.to_string();
        let back: IntPoly = text.parse().unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn composition_associative(p in small_poly(), q in small_poly(), r in small_poly()) {
        prop_assert_eq!(p.compose(&q).compose(&r), p.compose(&q.compose(&r)));
    }

    #[test]
    fn right_distributive(p in small_poly(), q in small_poly(), r in small_poly()) {
        prop_assert_eq!((&p + &q).compose(&r), &p.compose(&r) + &q.compose(&r));
    }

    #[test]
    fn right_cancellation(p in small_poly(), q in small_poly(), a in small_poly()) {
        // a with degree >= 1 is right cancellable
        let a = &a + &IntPoly::monomial(BigInt::from(1), 6);
        if p != q {
            prop_assert_ne!(p.compose(&a), q.compose(&a));
        }
    }

    #[test]
    fn constants_absorb(c in -99i64..=99, q in small_poly()) {
        let c = IntPoly::constant(BigInt::from(c));
        prop_assert_eq!(c.compose(&q), c);
    }

    #[test]
    fn degree_of_composition_multiplies(p in small_poly(), q in small_poly()) {
        if let (Some(dp), Some(dq)) = (p.degree(), q.degree()) {
            if dp >= 1 && dq >= 1 {
                prop_assert_eq!(p.compose(&q).degree(), Some(dp * dq));
            }
        }
    }

    #[test]
    fn membership_additively_closed(basis in any_basis(), p in small_poly(), q in small_poly()) {
        if member(basis, &p).member && member(basis, &q).member {
            prop_assert!(member(basis, &(&p + &q)).member);
            prop_assert!(member(basis, &(&p - &q)).member);
        }
    }

    #[test]
    fn membership_monotone_in_basis(p in small_poly(), small in any_basis(), large in any_basis()) {
        if small.subset_of(&large) && member(small, &p).member {
            prop_assert!(member(large, &p).member);
        }
    }

    #[test]
    fn pullback_through_x2(p in small_poly()) {
        let with_x = GeneratorBasis::new(false, true, true, false);
        let without_x = GeneratorBasis::new(false, false, true, false);
        let substituted = p.compose(&IntPoly::monomial(BigInt::from(1), 2));
        prop_assert_eq!(member(with_x, &p).member, member(without_x, &substituted).member);
    }

    #[test]
    fn pullback_through_x3(p in small_poly()) {
        let with_x = GeneratorBasis::new(true, true, false, true);
        let without_x = GeneratorBasis::new(true, false, false, true);
        let substituted = p.compose(&IntPoly::monomial(BigInt::from(1), 3));
        prop_assert_eq!(member(with_x, &p).member, member(without_x, &substituted).member);
    }
}

#[test]
fn left_distributivity_fails() {
    let p: IntPoly = "x^2".parse().unwrap();
    let q: IntPoly = "x".parse().unwrap();
    let lhs = p.compose(&(&q + &q));
    let rhs = &p.compose(&q) + &p.compose(&q);
    assert_eq!(lhs, "4x^2".parse().unwrap());
    assert_eq!(rhs, "2x^2".parse().unwrap());
    assert_ne!(lhs, rhs);
}
