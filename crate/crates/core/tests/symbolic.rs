use bss_core::arith::{int, rat, AlgebraicNumber, MultiPoly, NumberField, Rational, RationalFunction, Sign, UniPoly};
use bss_core::machine::{parse_program, run_concrete, Oracle, PathEvent};
use bss_core::stdlib::stdlib_program;
use bss_core::symbolic::{
    boundary_report, certify_trace, epsilon_certificate, explore_paths, extract_f, field_boundary_check,
    shadow_agreement, shadow_trace, verify_neighborhood, OracleMode, OraclePolicy, ShadowOutcome,
};

fn q(r: Rational) -> AlgebraicNumber {
    AlgebraicNumber::rational(r)
}

fn y() -> RationalFunction {
    RationalFunction::var(&NumberField::rationals(), 1, 0)
}

fn c(r: Rational) -> RationalFunction {
    RationalFunction::constant(&q(r), 1)
}

const SQUARE_PLUS_ONE: &str = "PROGRAM sq\nARITY 1\n  CONST c1 1\n  ADD c2 c0 c1\n  MUL c3 c2 c2\n  OUTPUT c3..c3\n";

#[test]
fn shadow_sgn() {
    let p = stdlib_program("sgn", &[]).unwrap();
    let t = shadow_trace(&p, &[q(int(5))], &Oracle::empty(), OracleMode::Concrete, 100).unwrap();
    assert_eq!(t.branch_log.len(), 1);
    assert_eq!((t.branch_log[0].function.clone(), t.branch_log[0].sign), (y(), Sign::Positive));
    assert_eq!(t.output_functions().unwrap(), &[c(int(1))]);
    assert_eq!(extract_f(&t).unwrap(), vec![y()]);
}

#[test]
fn shadow_square() {
    let p = parse_program(SQUARE_PLUS_ONE).unwrap();
    let t = shadow_trace(&p, &[q(int(3))], &Oracle::empty(), OracleMode::Concrete, 100).unwrap();
    let yp1 = y().add(&c(int(1)));
    assert_eq!(t.output_functions().unwrap(), &[yp1.mul(&yp1)]);
    assert_eq!(t.output_values().unwrap(), &[q(int(16))]);
    assert_eq!(extract_f(&t).unwrap(), vec![]);
}

#[test]
fn shadow_reciprocal() {
    let p = stdlib_program("reciprocal", &[]).unwrap();
    let t = shadow_trace(&p, &[q(int(3))], &Oracle::empty(), OracleMode::Concrete, 100).unwrap();
    let ym1 = y().sub(&c(int(1)));
    assert_eq!(t.branch_log[0].function, ym1);
    assert_eq!(t.branch_log[0].sign, Sign::Positive);
    assert_eq!(t.output_functions().unwrap(), &[c(int(1)).div(&ym1).unwrap()]);
    assert_eq!(t.output_values().unwrap(), &[q(rat(1, 2))]);
    assert_eq!(extract_f(&t).unwrap(), vec![ym1]);
}

#[test]
fn unguarded_division_joins_the_f_set() {
    let src = "PROGRAM inv\nARITY 1\n  CONST c1 1\n  DIV c2 c1 c0\n  OUTPUT c2..c2\n";
    let p = parse_program(src).unwrap();
    let t = shadow_trace(&p, &[q(rat(1, 2))], &Oracle::empty(), OracleMode::Concrete, 100).unwrap();
    assert_eq!(extract_f(&t).unwrap(), vec![y()]);
    let cert = certify_trace(&t, 30).unwrap();
    assert_eq!(cert.epsilon, rat(1, 4));
    assert!(verify_neighborhood(&p, &Oracle::empty(), &t, &cert, 50, 1).all_passed());
}

#[test]
fn extract_f_rejects_unhalted() {
    let p = stdlib_program("reciprocal", &[]).unwrap();
    let t = shadow_trace(&p, &[q(int(1))], &Oracle::empty(), OracleMode::Concrete, 50).unwrap();
    assert_eq!(t.outcome, ShadowOutcome::BudgetExhausted);
    assert!(extract_f(&t).is_none());
}

#[test]
fn field_boundary_on_sqrt2() {
    let k = NumberField::new("s", UniPoly::from_i64(&[-2, 0, 1]), int(1), int(2)).unwrap();
    let s = AlgebraicNumber::generator(&k);
    let p = parse_program(SQUARE_PLUS_ONE).unwrap();
    let t = shadow_trace(&p, std::slice::from_ref(&s), &Oracle::empty(), OracleMode::Concrete, 100).unwrap();
    let r = field_boundary_check(&t);
    assert!(r.passed(), "{:?}", r.violations);
    assert_eq!(r.max_degree, 2);
    let three_plus = AlgebraicNumber::from_poly(&k, &UniPoly::from_i64(&[3, 2]));
    assert_eq!(t.output_values().unwrap(), &[three_plus]);
    let empty = parse_program("PROGRAM e\nARITY 1\n").unwrap();
    let t = shadow_trace(&empty, &[q(int(1))], &Oracle::empty(), OracleMode::Concrete, 10).unwrap();
    assert!(field_boundary_check(&t).passed());
}

#[test]
fn shadow_matches_concrete_on_search_programs() {
    for (name, input) in [
        ("algebraic_semidecider", vec![q(rat(1, 2))]),
        ("dependence", vec![q(int(2)), q(int(3))]),
        ("qx_enumerator", vec![q(int(40))]),
        ("even_zeros", vec![q(rat(3, 40))]),
    ] {
        let p = stdlib_program(name, &[]).unwrap();
        let t = shadow_trace(&p, &input, &Oracle::empty(), OracleMode::Concrete, 20_000).unwrap();
        let (_, concrete) = run_concrete(&p, &input, &Oracle::empty(), 20_000).unwrap();
        shadow_agreement(&t, &concrete).unwrap();
        let r = field_boundary_check(&t);
        assert!(r.passed() && r.max_degree == 1, "{name}: {:?}", r.violations);
    }
}

#[test]
fn neighborhood_examples() {
    let sgn = stdlib_program("sgn", &[]).unwrap();
    let t = shadow_trace(&sgn, &[q(int(5))], &Oracle::empty(), OracleMode::Concrete, 100).unwrap();
    let cert = certify_trace(&t, 30).unwrap();
    assert_eq!(cert.epsilon, int(1));
    let r = verify_neighborhood(&sgn, &Oracle::empty(), &t, &cert, 20, 7);
    assert_eq!(r.passed, 20);

    let im = stdlib_program("interval_member", &[rat(1, 2), int(1)]).unwrap();
    let t = shadow_trace(&im, &[q(rat(3, 4))], &Oracle::empty(), OracleMode::Concrete, 100).unwrap();
    let cert = certify_trace(&t, 30).unwrap();
    assert_eq!(cert.epsilon, rat(1, 8));
    let r = verify_neighborhood(&im, &Oracle::empty(), &t, &cert, 20, 7);
    assert!(r.all_passed());

    let m = stdlib_program("m_const", &[]).unwrap();
    let t = shadow_trace(&m, &[q(int(3)), q(int(-1))], &Oracle::empty(), OracleMode::Concrete, 100).unwrap();
    let cert = epsilon_certificate(&extract_f(&t).unwrap(), &t.input, 0).unwrap();
    assert!(verify_neighborhood(&m, &Oracle::empty(), &t, &cert, 20, 7).all_passed());
}

#[test]
fn certificate_refused_on_equality_branch() {
    let sgn = stdlib_program("sgn", &[]).unwrap();
    let t = shadow_trace(&sgn, &[q(int(0))], &Oracle::empty(), OracleMode::Concrete, 100).unwrap();
    assert!(t.has_equality_branch());
    assert!(certify_trace(&t, 30).is_err());
}

#[test]
fn certified_neighborhood_at_an_algebraic_center() {
    let k = NumberField::new("s", UniPoly::from_i64(&[-2, 0, 1]), int(1), int(2)).unwrap();
    let s = AlgebraicNumber::generator(&k);
    let im = stdlib_program("interval_member", &[int(1), int(2)]).unwrap();
    let t = shadow_trace(&im, &[s], &Oracle::empty(), OracleMode::Concrete, 100).unwrap();
    let cert = certify_trace(&t, 30).unwrap();
    let r = verify_neighborhood(&im, &Oracle::empty(), &t, &cert, 30, 3);
    assert!(r.all_passed(), "{:?}", r.samples.iter().find(|s| !s.passed()));
}

#[test]
fn interval_member_paths_partition() {
    let im = stdlib_program("interval_member", &[rat(1, 2), int(1)]).unwrap();
    let tree = explore_paths(&im, 1, &Oracle::empty(), OraclePolicy::Generic, 20, 1000).unwrap();
    assert!(tree.leaves.iter().all(|l| l.halted()));
    for x in [rat(-1, 3), rat(1, 2), rat(2, 3), int(1), int(4)] {
        let point = [q(x.clone())];
        let hits = tree.matching_leaves(&point);
        assert_eq!(hits.len(), 1, "{x}");
        let inside = x >= rat(1, 2) && x <= int(1);
        assert_eq!(hits[0].outputs().unwrap()[0].constant_value(), Some(q(int(i64::from(inside)))));
    }
}

#[test]
fn dependence_paths_halt_only_on_equalities() {
    let p = stdlib_program("dependence", &[]).unwrap();
    let tree = explore_paths(&p, 2, &Oracle::empty(), OraclePolicy::Generic, 6, 200_000).unwrap();
    let halted: Vec<_> = tree.halted_leaves().collect();
    // each fork sends its zero branch to a halt and the other two onward
    assert_eq!(halted.len(), (1 << 6) - 1);
    for leaf in halted {
        assert!(leaf.measure_zero);
        assert_eq!(leaf.condition.constraints.last().unwrap().sign, Sign::Zero);
        assert!(!leaf.condition.constraints.is_empty());
    }
    let first = &tree.leaves[0];
    assert!(matches!(first.history.last(), Some(PathEvent::Branch { .. })));
}

#[test]
fn sgn_boundary_is_zero() {
    let sgn = stdlib_program("sgn", &[]).unwrap();
    let tree = explore_paths(&sgn, 1, &Oracle::empty(), OraclePolicy::Generic, 10, 100).unwrap();
    let b = boundary_report(&tree).unwrap();
    assert_eq!(b, vec![MultiPoly::var(&NumberField::rationals(), 1, 0)]);
}
