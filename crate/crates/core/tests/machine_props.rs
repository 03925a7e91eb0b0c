use bss_core::arith::{
    degree_over_q, int, nth_root_field, rat, sturm_count, sturm_isolate, AlgebraicNumber, Rational, UniPoly,
};
use bss_core::machine::{cantor_membership, oracle_query, run, run_concrete, Oracle, OracleKind, Status};
use bss_core::stdlib::{stdlib_program, ENTRIES};
use num_traits::Signed;
use proptest::prelude::*;

fn q(r: Rational) -> AlgebraicNumber {
    AlgebraicNumber::rational(r)
}

fn small_rat() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 1i64..=10).prop_map(|(n, d)| rat(n, d))
}

fn entry_index() -> impl Strategy<Value = usize> {
    0..ENTRIES.len()
}

/// Inputs for an entry; enumerators get a small nonnegative integer.
fn input_for(name: &str, arity: usize, a: &Rational, b: &Rational) -> Vec<AlgebraicNumber> {
    match name {
        "q_enumerator" | "qx_enumerator" => vec![q(a.numer().abs().into())],
        _ => [a, b].into_iter().take(arity).map(|r| q(r.clone())).collect(),
    }
}

fn oracle_for(name: &str) -> Oracle {
    if name == "m_toy" {
        Oracle::rationals()
    } else {
        Oracle::empty()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn runs_are_deterministic(i in entry_index(), a in small_rat(), b in small_rat()) {
        let e = &ENTRIES[i];
        let p = stdlib_program(e.name, &[]).unwrap();
        let input = input_for(e.name, e.arity.parse().unwrap(), &a, &b);
        let first = run_concrete(&p, &input, &oracle_for(e.name), 800).unwrap();
        let second = run_concrete(&p, &input, &oracle_for(e.name), 800).unwrap();
        prop_assert_eq!(first, second);
    }

    #[test]
    fn steps_respect_the_budget(i in entry_index(), a in small_rat(), b in small_rat(), budget in 1u64..600) {
        let e = &ENTRIES[i];
        let p = stdlib_program(e.name, &[]).unwrap();
        let input = input_for(e.name, e.arity.parse().unwrap(), &a, &b);
        let oracle = oracle_for(e.name);
        let r = run(&p, &input, &oracle, budget).unwrap();
        prop_assert!(r.steps <= budget);
        prop_assert_eq!(r.output.is_some(), r.status == Status::Halted);
        if r.halted() {
            let again = run(&p, &input, &oracle, r.steps + budget).unwrap();
            prop_assert_eq!(again, r.clone());
            let exact = run(&p, &input, &oracle, r.steps).unwrap();
            prop_assert_eq!(exact, r);
        }
    }

    #[test]
    fn rational_runs_stay_rational(i in entry_index(), a in small_rat(), b in small_rat()) {
        let e = &ENTRIES[i];
        let p = stdlib_program(e.name, &[]).unwrap();
        let input = input_for(e.name, e.arity.parse().unwrap(), &a, &b);
        let (_, trace) = run_concrete(&p, &input, &oracle_for(e.name), 500).unwrap();
        for s in &trace.steps {
            for (_, v) in &s.writes {
                prop_assert_eq!(degree_over_q(v), 1);
            }
        }
    }

    #[test]
    fn cantor_membership_closed_under_digit_pairs(digits in prop::collection::vec(prop::bool::ANY, 0..12),
                                                   tail in prop::collection::vec(prop::bool::ANY, 1..4)) {
        let value = |ds: &[u8]| ds.iter().enumerate().fold(Rational::from_integer(0.into()), |acc, (k, &d)| {
            acc + rat(i64::from(d), 3i64.pow(k as u32 + 1))
        });
        let mut ds: Vec<u8> = digits.iter().map(|&b| if b { 2 } else { 0 }).collect();
        prop_assert!(cantor_membership(&value(&ds)));
        for t in tail {
            let d = if t { 2 } else { 0 };
            ds.extend([d, d]);
            prop_assert!(cantor_membership(&value(&ds)));
        }
        // a single digit 1 with no way around it leaves the set
        ds.push(1);
        ds.push(1);
        prop_assert!(!cantor_membership(&value(&ds)));
    }

    #[test]
    fn isolating_intervals_hold_one_root(roots in prop::collection::btree_set(-12i64..12, 1..5), k in 1i64..4) {
        // (X - r/k) products, plus X^2 - 3 to bring in irrational roots
        let mut p = roots.iter().fold(UniPoly::one(), |acc, &r| acc.mul(&UniPoly::from_i64(&[-r, k])));
        p = p.mul(&UniPoly::from_i64(&[-3, 0, 1]));
        let seq = p.sturm_sequence();
        let ivs = sturm_isolate(&p).unwrap();
        prop_assert_eq!(ivs.len(), roots.len() + 2);
        for iv in ivs {
            prop_assert_eq!(sturm_count(&seq, iv.lo(), iv.hi()), 1);
        }
    }

    #[test]
    fn nth_roots_have_full_degree(c in 2i64..60, m_idx in 0usize..3) {
        let m = [2u32, 3, 5][m_idx];
        let (_, e) = nth_root_field(&int(c), m).unwrap();
        prop_assert_eq!(e.pow(m), q(int(c)));
        if bss_core::arith::exact_rational_root(&int(c), m).is_none() {
            prop_assert_eq!(degree_over_q(&e), m as usize);
        }
    }
}

#[test]
fn finite_set_oracle_answers_exactly_on_its_tuples() {
    let universe: Vec<Vec<AlgebraicNumber>> = [-1i64, 0, 1]
        .iter()
        .flat_map(|&a| [rat(1, 2), int(0), int(3)].into_iter().map(move |b| vec![q(int(a)), q(b)]))
        .collect();
    // every subset of the first five tuples, tested against the whole universe
    for mask in 0u32..32 {
        let members: Vec<_> = (0..5).filter(|i| mask & (1 << i) != 0).map(|i| universe[i].clone()).collect();
        let oracle = Oracle::new(OracleKind::FiniteSet(members.clone()));
        for t in &universe {
            assert_eq!(oracle_query(&oracle, t).unwrap(), members.contains(t));
        }
        assert!(!oracle_query(&oracle, &[q(int(-1))]).unwrap());
    }
}

#[test]
fn sgn_and_cantor_examples() {
    let sgn = stdlib_program("sgn", &[]).unwrap();
    let out = |x: i64| run(&sgn, &[q(int(x))], &Oracle::empty(), 10).unwrap().output.unwrap();
    assert_eq!(out(-3), vec![q(int(-1))]);
    assert_eq!(out(0), vec![q(int(0))]);
    let cantor = stdlib_program("cantor_cosemidecider", &[]).unwrap();
    assert_eq!(run(&cantor, &[q(rat(1, 2))], &Oracle::empty(), 10_000).unwrap().status, Status::Halted);
    assert_eq!(run(&cantor, &[q(rat(1, 4))], &Oracle::empty(), 10_000).unwrap().status, Status::BudgetExhausted);
}
