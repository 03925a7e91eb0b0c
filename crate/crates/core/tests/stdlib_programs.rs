use std::fs;
use std::path::PathBuf;

use bss_core::arith::{int, rat, AlgebraicNumber, NumberField, Rational, UniPoly};
use bss_core::machine::enumerate::{bipoly_at, poly_at, rational_at};
use bss_core::machine::{run, Oracle, RunResult, Status};
use bss_core::stdlib::{names, stdlib_program, stdlib_source};

fn q(r: Rational) -> AlgebraicNumber {
    AlgebraicNumber::rational(r)
}

fn run_named(name: &str, input: &[AlgebraicNumber], budget: u64) -> RunResult {
    let p = stdlib_program(name, &[]).unwrap();
    run(&p, input, &Oracle::empty(), budget).unwrap()
}

fn single_output(r: &RunResult) -> AlgebraicNumber {
    assert_eq!(r.status, Status::Halted, "{r:?}");
    let out = r.output.as_ref().unwrap();
    assert_eq!(out.len(), 1);
    out[0].clone()
}

fn sqrt2() -> AlgebraicNumber {
    let k = NumberField::new("s", UniPoly::from_i64(&[-2, 0, 1]), int(1), int(2)).unwrap();
    AlgebraicNumber::generator(&k)
}

#[test]
fn checked_in_sources_match_generators() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("stdlib");
    let bless = std::env::var_os("BSS_BLESS").is_some();
    for name in names() {
        let path = dir.join(format!("{name}.bss"));
        if bless {
            fs::write(&path, stdlib_source(name, &[]).unwrap()).unwrap();
        }
        let text = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(text, stdlib_source(name, &[]).unwrap(), "{name}.bss is stale");
    }
}

#[test]
fn sgn_outputs() {
    for (x, s) in [(int(-3), -1), (int(0), 0), (rat(2, 7), 1)] {
        assert_eq!(single_output(&run_named("sgn", &[q(x)], 100)), q(int(s)));
    }
    assert_eq!(single_output(&run_named("sgn", &[sqrt2().neg()], 100)), q(int(-1)));
    let p = stdlib_program("sgn", &[]).unwrap();
    assert_eq!(p.len(), 7);
    assert_eq!(p.labeled_count(), 3);
}

#[test]
fn interval_member_outputs() {
    for (x, want) in [(rat(1, 2), 1), (int(1), 1), (rat(3, 4), 1), (rat(1, 3), 0), (rat(5, 4), 0)] {
        assert_eq!(single_output(&run_named("interval_member", &[q(x.clone())], 100)), q(int(want)), "{x}");
    }
    assert_eq!(single_output(&run_named("interval_member", &[sqrt2().try_sub(&q(int(1))).unwrap()], 100)), q(int(0)));
}

#[test]
fn reciprocal_and_its_hang() {
    assert_eq!(single_output(&run_named("reciprocal", &[q(int(3))], 100)), q(rat(1, 2)));
    assert_eq!(run_named("reciprocal", &[q(int(1))], 500).status, Status::BudgetExhausted);
}

fn even_zeros_expected(x: &Rational) -> i64 {
    if *x <= int(0) || *x >= int(1) {
        return 0;
    }
    let mut hi = int(1);
    loop {
        let lo = &hi / int(2);
        if *x >= lo && *x <= hi {
            return 1;
        }
        if *x > &lo / int(2) {
            return 0;
        }
        hi = &lo / int(2);
    }
}

#[test]
fn even_zeros_matches_binary_expansion() {
    for d in 1..40i64 {
        for n in 0..=d {
            let x = rat(n, d);
            let r = run_named("even_zeros", &[q(x.clone())], 10_000);
            assert_eq!(single_output(&r), q(int(even_zeros_expected(&x))), "x = {x}");
        }
    }
    assert_eq!(single_output(&run_named("even_zeros", &[q(rat(1, 4))], 1000)), q(int(1)));
    assert_eq!(single_output(&run_named("even_zeros", &[q(rat(1, 8))], 1000)), q(int(1)));
    assert_eq!(single_output(&run_named("even_zeros", &[q(rat(3, 10))], 1000)), q(int(0)));
}

#[test]
fn cantor_cosemidecider_halts_off_the_set() {
    assert_eq!(single_output(&run_named("cantor_cosemidecider", &[q(rat(1, 2))], 1000)), q(int(1)));
    assert_eq!(single_output(&run_named("cantor_cosemidecider", &[q(rat(4, 9))], 1000)), q(int(1)));
    assert_eq!(single_output(&run_named("cantor_cosemidecider", &[q(int(2))], 1000)), q(int(1)));
    for x in [rat(1, 4), rat(3, 4), rat(1, 10), int(0), int(1)] {
        assert_eq!(run_named("cantor_cosemidecider", &[q(x)], 10_000).status, Status::BudgetExhausted);
    }
}

#[test]
fn q_enumerator_follows_the_host_order() {
    let mut seen = std::collections::HashSet::new();
    for n in 0..500u64 {
        let r = run_named("q_enumerator", &[q(int(n as i64))], 1_000_000);
        let v = single_output(&r);
        assert_eq!(v, q(rational_at(n)), "n = {n}");
        assert!(seen.insert(v.as_rational().unwrap().clone()));
    }
    assert_eq!(single_output(&run_named("q_enumerator", &[q(int(1))], 1000)), q(int(1)));
    assert_eq!(single_output(&run_named("q_enumerator", &[q(int(2))], 1000)), q(int(-1)));
}

#[test]
fn qx_enumerator_follows_the_host_order() {
    for n in 0..200u64 {
        let r = run_named("qx_enumerator", &[q(int(n as i64))], 1_000_000);
        assert_eq!(r.status, Status::Halted);
        let got: Vec<Rational> = r.output.unwrap().iter().map(|v| v.as_rational().unwrap().clone()).collect();
        assert_eq!(UniPoly::new(got.clone()), poly_at(n), "n = {n}");
        assert_eq!(got.len(), poly_at(n).degree().unwrap() + 1);
    }
}

fn first_root_index(x: &AlgebraicNumber) -> u64 {
    (0..)
        .find(|&n| {
            poly_at(n)
                .coeffs()
                .iter()
                .rev()
                .fold(AlgebraicNumber::zero_in(x.field()), |acc, c| {
                    acc.try_mul(x).unwrap().try_add(&q(c.clone())).unwrap()
                })
                .is_zero()
        })
        .unwrap()
}

#[test]
fn algebraic_semidecider_finds_the_first_polynomial() {
    for x in [int(0), int(1), rat(1, 2), int(-2), rat(2, 3)] {
        let x = q(x);
        let want = first_root_index(&x);
        let r = run_named("algebraic_semidecider", std::slice::from_ref(&x), 2_000_000);
        assert_eq!(single_output(&r), q(int(want as i64)), "x = {x}");
    }
    let s = sqrt2();
    let want = first_root_index(&s);
    assert_eq!(poly_at(want).monic(), UniPoly::from_i64(&[-2, 0, 1]));
    let r = run_named("algebraic_semidecider", &[s], 5_000_000);
    assert_eq!(single_output(&r), q(int(want as i64)));
}

fn first_dependence_index(x1: &AlgebraicNumber, x2: &AlgebraicNumber) -> u64 {
    (0..).find(|&n| bipoly_at(n).eval(&[x1.clone(), x2.clone()]).unwrap().is_zero()).unwrap()
}

#[test]
fn dependence_finds_the_first_relation() {
    let cases = [(q(int(2)), q(int(3))), (q(rat(1, 2)), q(int(-1))), (sqrt2(), sqrt2().try_add(&q(int(1))).unwrap())];
    for (x1, x2) in cases {
        let want = first_dependence_index(&x1, &x2);
        let r = run_named("dependence", &[x1.clone(), x2.clone()], 5_000_000);
        assert_eq!(single_output(&r), q(int(want as i64)), "({x1}, {x2})");
    }
}

#[test]
fn oracle_demo_programs() {
    let p = stdlib_program("m_toy", &[]).unwrap();
    let o = Oracle::rationals();
    let out = |x2: AlgebraicNumber| single_output(&run(&p, &[q(int(0)), x2], &o, 10).unwrap());
    assert_eq!(out(q(rat(1, 3))), q(int(1)));
    assert_eq!(out(sqrt2()), q(int(0)));
    assert_eq!(single_output(&run_named("m_const", &[q(int(4)), sqrt2()], 10)), q(int(0)));
    assert_eq!(single_output(&run_named("m_eq", &[sqrt2(), sqrt2()], 10)), q(int(1)));
    assert_eq!(single_output(&run_named("m_eq", &[sqrt2(), q(int(1))], 10)), q(int(0)));
}
