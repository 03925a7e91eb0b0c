use bss_core::arith::{
    int, interval_eval, minimal_polynomial, parse_rational, rat, sturm_count, AlgebraicNumber, FieldRef, MultiPoly,
    NumberField, RatInterval, Rational, RationalFunction, Sign, UniPoly,
};
use proptest::prelude::*;

fn sqrt2() -> FieldRef {
    NumberField::new("s", UniPoly::from_i64(&[-2, 0, 1]), int(1), int(2)).unwrap()
}

fn cbrt2() -> FieldRef {
    NumberField::new("c", UniPoly::from_i64(&[-2, 0, 0, 1]), int(1), int(2)).unwrap()
}

fn small_rat() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

fn element(field: FieldRef) -> impl Strategy<Value = AlgebraicNumber> {
    let d = field.degree();
    prop::collection::vec(small_rat(), d).prop_map(move |cs| AlgebraicNumber::new(field.clone(), cs).unwrap())
}

fn both_fields() -> impl Strategy<Value = FieldRef> {
    prop_oneof![Just(sqrt2()), Just(cbrt2())]
}

fn pair() -> impl Strategy<Value = (AlgebraicNumber, AlgebraicNumber)> {
    both_fields().prop_flat_map(|f| (element(f.clone()), element(f)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms((a, b) in pair()) {
        prop_assert_eq!(a.try_add(&b).unwrap().try_sub(&b).unwrap(), a.clone());
        prop_assert_eq!(a.try_mul(&b).unwrap(), b.try_mul(&a).unwrap());
        if !b.is_zero() {
            prop_assert_eq!(a.try_mul(&b).unwrap().try_div(&b).unwrap(), a.clone());
            prop_assert!(b.try_mul(&b.inverse().unwrap()).unwrap().is_one());
        }
    }

    #[test]
    fn sign_agrees_with_floating_point((a, _) in pair()) {
        let f = a.to_f64();
        let s = a.sign();
        if f.abs() > 1e-9 {
            prop_assert_eq!(s, if f > 0.0 { Sign::Positive } else { Sign::Negative });
        }
        prop_assert_eq!(s == Sign::Zero, a.is_zero());
        prop_assert_eq!(a.neg().sign(), s.negate());
    }

    #[test]
    fn minimal_polynomial_vanishes((a, _) in pair()) {
        let p = minimal_polynomial(&a);
        let field = a.field().clone();
        let value = p.coeffs().iter().rev().fold(AlgebraicNumber::zero_in(&field), |acc, c| {
            acc.try_mul(&a).unwrap().try_add(&AlgebraicNumber::rational(c.clone())).unwrap()
        });
        prop_assert!(value.is_zero());
        prop_assert_eq!(p.leading(), Some(&int(1)));
        prop_assert!(p.degree().unwrap() == 1 || p.degree() == Some(field.degree()));
    }

    #[test]
    fn enclosures_contain_the_value((a, _) in pair(), k in 1i32..40) {
        let w = bss_core::arith::two_pow(-k);
        let iv = a.enclosure(&w);
        prop_assert!(iv.width() <= w);
        let lo = a.try_sub(&AlgebraicNumber::rational(iv.lo().clone())).unwrap().sign();
        let hi = AlgebraicNumber::rational(iv.hi().clone()).try_sub(&a).unwrap().sign();
        prop_assert!(lo != Sign::Negative && hi != Sign::Negative);
    }

    #[test]
    fn display_round_trips((a, _) in pair()) {
        let f = a.field().clone();
        prop_assert_eq!(AlgebraicNumber::parse_with(&a.to_string(), &[f]).unwrap(), a);
    }

    #[test]
    fn rational_text_round_trips(r in small_rat()) {
        prop_assert_eq!(parse_rational(&bss_core::arith::fmt_rational(&r)).unwrap(), r);
    }

    #[test]
    fn sturm_counts_distinct_roots(roots in prop::collection::btree_set(-20i64..20, 1..6)) {
        let p = roots.iter().fold(UniPoly::one(), |acc, &r| acc.mul(&UniPoly::from_i64(&[-r, 1])));
        let seq = p.sturm_sequence();
        prop_assert_eq!(sturm_count(&seq, &int(-100), &int(100)), roots.len());
        let mid = roots.iter().next().copied().unwrap();
        prop_assert_eq!(sturm_count(&seq, &(int(mid) - rat(1, 2)), &(int(mid) + rat(1, 2))), 1);
    }

    #[test]
    fn interval_evaluation_encloses(cs in prop::collection::vec((-5i64..5, 0u32..3, 0u32..3), 1..6),
                                    x in small_rat(), y in small_rat(), r in 1i64..8) {
        let q = NumberField::rationals();
        let p = MultiPoly::from_terms(&q, 2, cs.into_iter().map(|(c, a, b)| (vec![a, b], AlgebraicNumber::rational(int(c)))));
        let radius = rat(1, r);
        let bx = [RatInterval::centered(&x, &radius), RatInterval::centered(&y, &radius)];
        let enclosure = interval_eval(&p, &bx);
        for (dx, dy) in [(0, 0), (1, 1), (-1, 1), (1, -1), (-1, -1)] {
            let pt = [
                AlgebraicNumber::rational(&x + &radius * int(dx)),
                AlgebraicNumber::rational(&y + &radius * int(dy)),
            ];
            let v = p.eval(&pt).unwrap();
            prop_assert!(enclosure.contains(v.as_rational().unwrap()));
        }
    }

    #[test]
    fn rational_functions_are_canonical(a in -4i64..4, b in 1i64..4, c in -4i64..4) {
        let q = NumberField::rationals();
        let y = RationalFunction::var(&q, 2, 0);
        let z = RationalFunction::var(&q, 2, 1);
        let k = |n: i64| RationalFunction::constant(&AlgebraicNumber::rational(int(n)), 2);
        let f = y.mul(&k(a)).add(&z.mul(&k(b)));
        let g = z.sub(&k(c)).mul(&y.add(&k(1)));
        let h = f.mul(&g).div(&g).unwrap();
        prop_assert_eq!(&h, &f);
        prop_assert!(f.sub(&h).is_zero());
        if !f.is_zero() {
            prop_assert!(f.div(&f).unwrap().constant_value().unwrap().is_one());
        }
    }
}
