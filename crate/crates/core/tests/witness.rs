use bss_core::arith::{degree_over_q, int, rat, AlgebraicNumber, Rational, Sign};
use bss_core::machine::enumerate::bipoly_at;
use bss_core::machine::{cantor_membership, run, Oracle, OracleKind, Status};
use bss_core::stdlib::stdlib_program;
use bss_core::witness::{
    build_counterexample, cantor_decompose, dependence_program, even_zeros_truth, place_root, Verdict,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(r: Rational) -> AlgebraicNumber {
    AlgebraicNumber::rational(r)
}

#[test]
fn m_toy_counterexample() {
    let m = stdlib_program("m_toy", &[]).unwrap();
    let r = build_counterexample(&m, &Oracle::rationals(), &int(2), &[q(int(5)), q(int(7))], 1000).unwrap();
    assert_eq!(r.verdict, Verdict::CounterexampleConfirmed, "{}", r.to_text());
    assert_eq!((r.n, r.m), (1, 2));
    assert_eq!(r.functions, vec!["Y2"]);
    assert!(r.path_equal);
    assert_eq!(r.machine_output, Some(vec!["0".to_string()]));
    assert_eq!(r.x2_degree, Some(2));
    assert_eq!(r.oracle_check.as_ref().unwrap().method, "degree_bound");
    assert!(r.oracle_check.as_ref().unwrap().passed);
}

#[test]
fn m_const_counterexample() {
    let m = stdlib_program("m_const", &[]).unwrap();
    let r = build_counterexample(&m, &Oracle::empty(), &int(2), &[q(int(5)), q(int(7))], 1000).unwrap();
    assert!(r.confirmed());
    assert!(r.functions.is_empty());
    assert_eq!((r.n, r.m, r.x2_degree), (0, 2, Some(2)));
    assert_eq!(r.epsilon.as_deref(), Some("1"));
}

#[test]
fn m_eq_is_inapplicable_at_a_diagonal_probe() {
    let m = stdlib_program("m_eq", &[]).unwrap();
    let r = build_counterexample(&m, &Oracle::empty(), &int(2), &[q(int(5)), q(int(5))], 1000).unwrap();
    assert_eq!(r.verdict, Verdict::PipelineInapplicable);
    assert!(r.reason.unwrap().contains("equality"));
}

#[test]
fn finite_set_oracle_is_checked_directly() {
    let m = stdlib_program("m_toy", &[]).unwrap();
    let oracle = Oracle::new(OracleKind::FiniteSet(vec![vec![q(int(7))]]));
    let r = build_counterexample(&m, &oracle, &int(3), &[q(int(3)), q(int(7))], 1000).unwrap();
    // the query Y2 is nonconstant, so the probe run takes the generic answer "no"
    assert!(r.confirmed(), "{}", r.to_text());
    assert_eq!(r.oracle_check.unwrap().method, "finite_set");
}

#[test]
fn reports_are_reproducible() {
    let m = stdlib_program("m_toy", &[]).unwrap();
    let a = build_counterexample(&m, &Oracle::rationals(), &int(3), &[q(int(1)), q(rat(1, 3))], 1000).unwrap();
    let b = build_counterexample(&m, &Oracle::rationals(), &int(3), &[q(int(1)), q(rat(1, 3))], 1000).unwrap();
    assert_eq!(a, b);
    assert!(a.confirmed());
    let json = serde_json::to_value(&a).unwrap();
    assert_eq!(json["verdict"], "counterexample_confirmed");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn place_root_guards_hold(x1n in 2i64..40, m_idx in 0usize..4, cn in -200i64..200, en in 1i64..64) {
        let m = [2u32, 3, 5, 7][m_idx];
        let x1 = int(x1n);
        prop_assume!(bss_core::arith::exact_rational_root(&x1, m).is_none());
        let center = rat(cn, 7);
        let eps = rat(en, 64);
        let (b, x2) = place_root(&x1, m, &center, &eps).unwrap();
        prop_assert_eq!(x2.try_sub(&q(&center - &eps)).unwrap().sign(), Sign::Positive);
        prop_assert_eq!(q(&center + &eps).try_sub(&x2).unwrap().sign(), Sign::Positive);
        prop_assert_eq!(degree_over_q(&x2), m as usize);
        prop_assert_eq!(x2.try_sub(&q(b)).unwrap().pow(m), q(x1));
    }
}

#[test]
fn cantor_decomposition_of_triadic_rationals() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for _ in 0..200 {
        let k = rng.gen_range(0..=20u32);
        let den = 3i64.pow(k);
        let x = rat(rng.gen_range(0..=den), den);
        let p = cantor_decompose(&x, 64).unwrap();
        assert_eq!(&p.c1 + &p.c2 / int(2), x);
        assert!(cantor_membership(&p.c1) && cantor_membership(&p.c2));
    }
}

#[test]
fn even_zeros_program_matches_truth() {
    let p = stdlib_program("even_zeros", &[]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let d = rng.gen_range(2..5000i64);
        let x = rat(rng.gen_range(1..d), d);
        let r = run(&p, &[q(x.clone())], &Oracle::empty(), 100_000).unwrap();
        assert_eq!(r.output.unwrap(), vec![q(int(i64::from(even_zeros_truth(&x))))], "{x}");
    }
}

/// Small-height rationals: the search reaches their relations quickly.
fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    let d = rng.gen_range(1..=2i64);
    let n = rng.gen_range(-3..=3i64);
    rat(n, d)
}

#[test]
fn dependence_program_halts_on_random_pairs() {
    let p = dependence_program();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let pair = [q(small_rational(&mut rng)), q(small_rational(&mut rng))];
        let index = (0..).find(|&n| bipoly_at(n).eval(&pair).unwrap().is_zero()).unwrap();
        let budget = 1000 * (index + 1);
        let r = run(&p, &pair, &Oracle::empty(), budget).unwrap();
        assert_eq!(r.status, Status::Halted, "{pair:?}");
        assert_eq!(r.output.unwrap(), vec![q(int(index as i64))]);
    }
}
