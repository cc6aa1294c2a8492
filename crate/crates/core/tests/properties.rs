//! Property tests over randomized algebra values, with shrinking.

use gysin_core::bundle::VectorBundleData;
use gysin_core::expr::{self, Bindings, ClassKind, Expression};
use gysin_core::laurent::{staged_extract, LaurentPoly};
use gysin_core::oracle::brute_force_coeff;
use gysin_core::ring::{RingDescriptor, RingElement};
use num_bigint::BigInt;
use proptest::prelude::*;
use std::sync::Arc;

fn ring() -> Arc<RingDescriptor> {
    RingDescriptor::new(vec![("h".into(), 1), ("u".into(), 2)], 4).unwrap()
}

fn arb_element() -> impl Strategy<Value = RingElement> {
    prop::collection::vec((prop::collection::vec(0u32..4, 2), -5i64..5), 0..6).prop_map(|terms| {
        let r = ring();
        let mut out = RingElement::zero(&r);
        for (exponents, coefficient) in terms {
            out = &out + &RingElement::monomial(&r, &exponents, BigInt::from(coefficient));
        }
        out
    })
}

fn arb_laurent(d: usize) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((prop::collection::vec(-3i32..4, d), -4i64..5), 0..5).prop_map(
        move |terms| {
            let r = ring();
            let mut out = LaurentPoly::zero(&r, d);
            for (exponents, coefficient) in terms {
                out = &out
                    + &LaurentPoly::monomial(RingElement::constant(&r, coefficient), &exponents);
            }
            out
        },
    )
}

proptest! {
    #[test]
    fn ring_addition_commutes(a in arb_element(), b in arb_element()) {
        prop_assert_eq!(&a + &b, &b + &a);
    }

    #[test]
    fn ring_multiplication_associates(
        a in arb_element(),
        b in arb_element(),
        c in arb_element()
    ) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn ring_distributes(a in arb_element(), b in arb_element(), c in arb_element()) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn grade_components_sum_back(a in arb_element()) {
        let r = a.ring().clone();
        let mut total = RingElement::zero(&r);
        for k in 0..=r.truncation() {
            total = &total + &a.grade_component(k);
        }
        prop_assert_eq!(total, a);
    }

    #[test]
    fn laurent_multiplication_commutes(f in arb_laurent(2), g in arb_laurent(2)) {
        prop_assert_eq!(&f * &g, &g * &f);
    }

    #[test]
    fn shifting_rule(
        f in arb_laurent(2),
        shift in prop::collection::vec(-3i32..4, 2),
        target in prop::collection::vec(-2i32..5, 2)
    ) {
        let shifted_target: Vec<i32> =
            target.iter().zip(&shift).map(|(a, b)| a + b).collect();
        prop_assert_eq!(f.shift(&shift).coeff(&shifted_target), f.coeff(&target));
    }

    #[test]
    fn staged_extraction_matches_brute_force(
        f in arb_laurent(2),
        g in arb_laurent(2),
        h in arb_laurent(2),
        target in prop::collection::vec(0u32..4, 2)
    ) {
        let factors = [&f, &g, &h];
        let signed: Vec<i32> = target.iter().map(|&e| e as i32).collect();
        prop_assert_eq!(
            staged_extract(&factors, &target),
            brute_force_coeff(&factors, &signed)
        );
    }

    #[test]
    fn segre_inverts_chern(
        c1 in -3i64..4,
        c2_terms in prop::collection::vec((0u32..3, -3i64..4), 0..3)
    ) {
        let r = ring();
        let h = RingElement::generator(&r, 0);
        let u = RingElement::generator(&r, 1);
        let c1 = h.scale(&BigInt::from(c1));
        let mut c2 = RingElement::zero(&r);
        for (pick_u, coefficient) in c2_terms {
            let monomial = if pick_u == 0 { u.clone() } else { h.pow(2) };
            c2 = &c2 + &monomial.scale(&BigInt::from(coefficient));
        }
        let bundle = VectorBundleData::new("E", 2, vec![c1, c2]).unwrap();
        let segre = bundle.segre(&r);
        let mut product = RingElement::zero(&r);
        for k in 0..=r.truncation() as i64 {
            for i in 0..=k {
                product = &product + &(&segre.get(i) * &bundle.chern_class(&r, k - i));
            }
        }
        prop_assert_eq!(product, RingElement::one(&r));
    }
}

fn arb_expression() -> impl Strategy<Value = Expression> {
    let leaf = prop_oneof![
        (0u64..100).prop_map(|v| Expression::Int(BigInt::from(v))),
        (1usize..4).prop_map(Expression::Xi),
        (1usize..4).prop_map(Expression::TVar),
        Just(Expression::Generator("h".into())),
        Just(Expression::Generator("u".into())),
        (-2i64..5).prop_map(|index| Expression::ClassRef {
            kind: ClassKind::Segre,
            index,
            bundle: "E".into()
        }),
        (0i64..4).prop_map(|index| Expression::ClassRef {
            kind: ClassKind::Chern,
            index,
            bundle: "E".into()
        }),
        Just(Expression::LineClass("L".into())),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Expression::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Expression::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Expression::Mul(Box::new(a), Box::new(b))),
            inner.clone().prop_map(|a| Expression::Neg(Box::new(a))),
            (inner, 0u32..5).prop_map(|(a, k)| Expression::Pow(Box::new(a), k)),
        ]
    })
}

fn bindings() -> Bindings {
    let r = ring();
    let h = RingElement::generator(&r, 0);
    let u = RingElement::generator(&r, 1);
    let bundle = VectorBundleData::new("E", 3, vec![h.clone(), u]).unwrap();
    let mut b = Bindings::new(r);
    b.add_bundle(bundle);
    b.add_line("L", gysin_core::bundle::LineBundleClass::new(h).unwrap());
    b
}

proptest! {
    #[test]
    fn rendering_round_trips(e in arb_expression()) {
        let rendered = e.to_string();
        let reparsed = expr::parse(&rendered);
        prop_assert_eq!(reparsed, Ok(e), "rendered: {}", rendered);
    }

    #[test]
    fn eval_is_a_ring_homomorphism(a in arb_expression(), b in arb_expression()) {
        let bindings = bindings();
        let product = Expression::Mul(Box::new(a.clone()), Box::new(b.clone()));
        let sum = Expression::Add(Box::new(a.clone()), Box::new(b.clone()));
        let va = expr::eval(&a, &bindings, 3).unwrap();
        let vb = expr::eval(&b, &bindings, 3).unwrap();
        prop_assert_eq!(expr::eval(&product, &bindings, 3).unwrap(), &va * &vb);
        prop_assert_eq!(expr::eval(&sum, &bindings, 3).unwrap(), &va + &vb);
    }
}
