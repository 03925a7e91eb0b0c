//! Small deciders and demo programs.

use crate::arith::{fmt_rational, Rational};

use super::asm::Asm;

/// Sign of the input as -1, 0 or 1.
pub fn sgn() -> String {
    let mut a = Asm::new("sgn", "1");
    a.op("BRANCH c0 n z p");
    a.label("n");
    a.op("CONST c0 -1");
    a.op("OUTPUT c0..c0");
    a.label("z");
    a.op("CONST c0 0");
    a.op("OUTPUT c0..c0");
    a.label("p");
    a.op("CONST c0 1");
    a.op("OUTPUT c0..c0");
    a.finish()
}

/// 1 if the input lies in the closed interval [lo, hi], else 0.
pub fn interval_member(lo: &Rational, hi: &Rational) -> String {
    let mut a = Asm::new("interval_member", "1");
    a.header(format!("PARAM lo = {}", fmt_rational(lo)));
    a.header(format!("PARAM hi = {}", fmt_rational(hi)));
    a.op("CONST c1 $lo");
    a.op("SUB c2 c0 c1");
    a.op("BRANCH c2 out above above");
    a.label("above");
    a.op("CONST c1 $hi");
    a.op("SUB c2 c0 c1");
    a.op("BRANCH c2 in in out");
    a.label("in");
    a.op("CONST c3 1");
    a.op("OUTPUT c3..c3");
    a.label("out");
    a.op("CONST c3 0");
    a.op("OUTPUT c3..c3");
    a.finish()
}

/// 1/(x-1), guarded by a sign test; the guard's zero branch never halts.
pub fn reciprocal() -> String {
    let mut a = Asm::new("reciprocal", "1");
    a.op("CONST c1 1");
    a.op("SUB c2 c0 c1");
    a.op("BRANCH c2 ok hang ok");
    a.label("ok");
    a.op("DIV c3 c1 c2");
    a.op("OUTPUT c3..c3");
    a.label("hang");
    a.op("JMP hang");
    a.finish()
}

/// Total decider for the inputs in (0,1) lying in some [2^-(2m+1), 2^-2m],
/// i.e. whose binary expansion starts with an even number of zeros.
///
/// Doubles the input until it reaches 1/2, tracking the parity of the
/// number of doublings in the program counter.
pub fn even_zeros() -> String {
    let mut a = Asm::new("even_zeros", "1");
    a.op("BRANCH c0 no no pos");
    a.label("pos");
    a.op("CONST c1 1");
    a.op("SUB c2 c0 c1");
    a.op("BRANCH c2 even no no");
    a.note("even number of doublings so far");
    a.label("even");
    a.op("CONST c1 1/2");
    a.op("SUB c2 c0 c1");
    a.op("BRANCH c2 dbl_even yes yes");
    a.label("dbl_even");
    a.op("ADD c0 c0 c0");
    a.note("odd number of doublings; only exactly 1/2 is a hit");
    a.op("SUB c2 c0 c1");
    a.op("BRANCH c2 dbl_odd yes no");
    a.label("dbl_odd");
    a.op("ADD c0 c0 c0");
    a.op("JMP even");
    a.label("yes");
    a.op("CONST c3 1");
    a.op("OUTPUT c3..c3");
    a.label("no");
    a.op("CONST c3 0");
    a.op("OUTPUT c3..c3");
    a.finish()
}

/// Halts with output 1 exactly when the input is outside the Cantor set,
/// by following the input into the surviving third at each level and
/// stopping once it falls in a deleted open middle third.
pub fn cantor_cosemidecider() -> String {
    let mut a = Asm::new("cantor_cosemidecider", "1");
    a.op("BRANCH c0 out upper upper");
    a.label("upper");
    a.op("CONST c1 1");
    a.op("SUB c2 c0 c1");
    a.op("BRANCH c2 level level out");
    a.label("level");
    a.op("CONST c1 1/3");
    a.op("SUB c2 c0 c1");
    a.op("BRANCH c2 low low mid");
    a.label("mid");
    a.op("CONST c1 2/3");
    a.op("SUB c2 c0 c1");
    a.op("BRANCH c2 out high high");
    a.note("x <- 3x - 2");
    a.label("high");
    a.op("CONST c3 3");
    a.op("MUL c0 c0 c3");
    a.op("CONST c1 2");
    a.op("SUB c0 c0 c1");
    a.op("JMP level");
    a.note("x <- 3x");
    a.label("low");
    a.op("CONST c3 3");
    a.op("MUL c0 c0 c3");
    a.op("JMP level");
    a.label("out");
    a.op("CONST c4 1");
    a.op("OUTPUT c4..c4");
    a.finish()
}

/// Outputs 1 iff the oracle accepts the second input.
pub fn m_toy() -> String {
    let mut a = Asm::new("m_toy", "2");
    a.op("ORACLE c1..c1 yes no");
    a.label("yes");
    a.op("CONST c2 1");
    a.op("OUTPUT c2..c2");
    a.label("no");
    a.op("CONST c2 0");
    a.op("OUTPUT c2..c2");
    a.finish()
}

/// Always outputs 0.
pub fn m_const() -> String {
    let mut a = Asm::new("m_const", "2");
    a.op("CONST c2 0");
    a.op("OUTPUT c2..c2");
    a.finish()
}

/// Outputs 1 iff the two inputs are equal.
pub fn m_eq() -> String {
    let mut a = Asm::new("m_eq", "2");
    a.op("SUB c2 c0 c1");
    a.op("BRANCH c2 ne eq ne");
    a.label("ne");
    a.op("CONST c3 0");
    a.op("OUTPUT c3..c3");
    a.label("eq");
    a.op("CONST c3 1");
    a.op("OUTPUT c3..c3");
    a.finish()
}
