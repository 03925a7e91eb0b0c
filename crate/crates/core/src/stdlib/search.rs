//! Enumeration programs: the ℚ and ℚ[X] enumerators and the two searches
//! over nonzero polynomials.
//!
//! All bookkeeping lives in absolute scratch cells at negative addresses so
//! the head can move freely. Integers (indices, counters, exponents) are
//! ordinary machine values updated by adding 1 and tested by sign branches.
//! The orders are the ones mirrored host-side in `machine::enumerate`.

use super::asm::Asm;

const ONE: &str = "@-1";
const HALF: &str = "@-2";
/// 2^(w-1) for the current weight w.
const POW: &str = "@-3";
/// Counter within the current weight.
const TICK: &str = "@-4";
/// Index of the current polynomial.
const INDEX: &str = "@-5";
const ACC: &str = "@-6";
const XPOW: &str = "@-7";
/// Weight of the bit currently examined by the composition walk.
const BIT: &str = "@-8";
const REM: &str = "@-9";
const PART: &str = "@-10";
const LAST: &str = "@-11";
const COUNT: &str = "@-12";
const PHASE: &str = "@-13";
const NUM: &str = "@-14";
const DEN: &str = "@-15";
const GA: &str = "@-16";
const GB: &str = "@-17";
const TMP: &str = "@-18";
const COEF: &str = "@-19";
const LOOPS: &str = "@-20";
const EXP1: &str = "@-21";
const EXP2: &str = "@-22";
const MONO: &str = "@-23";
const K1: &str = "@-24";
const K2: &str = "@-25";

/// Replaces (PHASE, NUM, DEN) by its successor in the ℚ order and jumps to
/// `done`. PHASE is 0 for the value 0, 1 for +NUM/DEN and -1 for -NUM/DEN.
fn next_rational(a: &mut Asm, pre: &str, done: &str) {
    a.label(pre);
    a.op(format!("BRANCH {PHASE} {pre}_adv {pre}_start {pre}_flip"));
    a.label(&format!("{pre}_start"));
    a.op(format!("CONST {NUM} 1"));
    a.op(format!("CONST {DEN} 1"));
    a.op(format!("CONST {PHASE} 1"));
    a.op(format!("JMP {done}"));
    a.label(&format!("{pre}_flip"));
    a.op(format!("CONST {PHASE} -1"));
    a.op(format!("JMP {done}"));
    a.note("next fraction of the same height, else the first of the next height");
    a.label(&format!("{pre}_adv"));
    a.op(format!("SUB {TMP} {DEN} {ONE}"));
    a.op(format!("BRANCH {TMP} {pre}_height {pre}_height {pre}_same"));
    a.label(&format!("{pre}_same"));
    a.op(format!("ADD {NUM} {NUM} {ONE}"));
    a.op(format!("SUB {DEN} {DEN} {ONE}"));
    a.op(format!("JMP {pre}_gcd"));
    a.label(&format!("{pre}_height"));
    a.op(format!("ADD {DEN} {NUM} {DEN}"));
    a.op(format!("CONST {NUM} 1"));
    a.note("keep only reduced fractions: gcd by repeated subtraction");
    a.label(&format!("{pre}_gcd"));
    a.op(format!("COPY {GA} {NUM}"));
    a.op(format!("COPY {GB} {DEN}"));
    a.label(&format!("{pre}_gloop"));
    a.op(format!("SUB {TMP} {GA} {GB}"));
    a.op(format!("BRANCH {TMP} {pre}_gb {pre}_gdone {pre}_ga"));
    a.label(&format!("{pre}_ga"));
    a.op(format!("SUB {GA} {GA} {GB}"));
    a.op(format!("JMP {pre}_gloop"));
    a.label(&format!("{pre}_gb"));
    a.op(format!("SUB {GB} {GB} {GA}"));
    a.op(format!("JMP {pre}_gloop"));
    a.label(&format!("{pre}_gdone"));
    a.op(format!("SUB {TMP} {GA} {ONE}"));
    a.op(format!("BRANCH {TMP} {pre}_adv {pre}_ok {pre}_adv"));
    a.label(&format!("{pre}_ok"));
    a.op(format!("CONST {PHASE} 1"));
    a.op(format!("JMP {done}"));
}

/// Sets COEF to the rational at position COUNT of the ℚ order (COUNT is
/// consumed), then jumps to `done`.
fn decode_rational(a: &mut Asm, pre: &str, done: &str) {
    a.label(pre);
    a.op(format!("CONST {PHASE} 0"));
    a.label(&format!("{pre}_loop"));
    a.op(format!("BRANCH {COUNT} {pre}_val {pre}_val {pre}_step"));
    a.label(&format!("{pre}_step"));
    a.op(format!("SUB {COUNT} {COUNT} {ONE}"));
    next_rational(a, &format!("{pre}_nx"), &format!("{pre}_loop"));
    a.label(&format!("{pre}_val"));
    a.op(format!("BRANCH {PHASE} {pre}_neg {pre}_zero {pre}_pos"));
    a.label(&format!("{pre}_zero"));
    a.op(format!("CONST {COEF} 0"));
    a.op(format!("JMP {done}"));
    a.label(&format!("{pre}_pos"));
    a.op(format!("DIV {COEF} {NUM} {DEN}"));
    a.op(format!("JMP {done}"));
    a.label(&format!("{pre}_neg"));
    a.op(format!("DIV {COEF} {NUM} {DEN}"));
    a.op(format!("CONST {TMP} 0"));
    a.op(format!("SUB {COEF} {TMP} {COEF}"));
    a.op(format!("JMP {done}"));
}

/// Walks the composition selected by (POW, TICK), decoding one coefficient
/// per part into COEF. `use_coef` emits the code consuming COEF and must end
/// by jumping to `{pre}_ret`. Jumps to `finished` after the last part.
fn walk_polynomial(a: &mut Asm, pre: &str, finished: &str, use_coef: impl FnOnce(&mut Asm, &str)) {
    a.label(pre);
    a.op(format!("MUL {BIT} {POW} {HALF}"));
    a.op(format!("COPY {REM} {TICK}"));
    a.op(format!("CONST {PART} 1"));
    a.label(&format!("{pre}_bit"));
    a.op(format!("SUB {TMP} {BIT} {ONE}"));
    a.op(format!("BRANCH {TMP} {pre}_last {pre}_test {pre}_test"));
    a.label(&format!("{pre}_test"));
    a.op(format!("SUB {TMP} {REM} {BIT}"));
    a.op(format!("BRANCH {TMP} {pre}_cut {pre}_join {pre}_join"));
    a.label(&format!("{pre}_join"));
    a.op(format!("ADD {PART} {PART} {ONE}"));
    a.op(format!("SUB {REM} {REM} {BIT}"));
    a.op(format!("MUL {BIT} {BIT} {HALF}"));
    a.op(format!("JMP {pre}_bit"));
    a.note("a part p before the last encodes coefficient index p-1");
    a.label(&format!("{pre}_cut"));
    a.op(format!("SUB {COUNT} {PART} {ONE}"));
    a.op(format!("CONST {LAST} 0"));
    a.op(format!("JMP {pre}_dec"));
    a.label(&format!("{pre}_last"));
    a.op(format!("COPY {COUNT} {PART}"));
    a.op(format!("CONST {LAST} 1"));
    decode_rational(a, &format!("{pre}_dec"), &format!("{pre}_use"));
    a.label(&format!("{pre}_use"));
    use_coef(a, &format!("{pre}_ret"));
    a.label(&format!("{pre}_ret"));
    a.op(format!("BRANCH {LAST} {pre}_more {pre}_more {finished}"));
    a.label(&format!("{pre}_more"));
    a.op(format!("CONST {PART} 1"));
    a.op(format!("MUL {BIT} {BIT} {HALF}"));
    a.op(format!("JMP {pre}_bit"));
}

/// Moves (POW, TICK) to the next composition, then jumps to `done`.
fn advance_tick(a: &mut Asm, pre: &str, done: &str) {
    a.op(format!("ADD {TICK} {TICK} {ONE}"));
    a.op(format!("SUB {TMP} {TICK} {POW}"));
    a.op(format!("BRANCH {TMP} {done} {pre}_grow {done}"));
    a.label(&format!("{pre}_grow"));
    a.op(format!("ADD {POW} {POW} {POW}"));
    a.op(format!("CONST {TICK} 0"));
    a.op(format!("JMP {done}"));
}

fn constants(a: &mut Asm) {
    a.op(format!("CONST {ONE} 1"));
    a.op(format!("CONST {HALF} 1/2"));
    a.op(format!("CONST {POW} 1"));
    a.op(format!("CONST {TICK} 0"));
}

/// Input n; output the n-th rational of the ℚ order.
pub fn q_enumerator() -> String {
    let mut a = Asm::new("q_enumerator", "1");
    a.op(format!("CONST {ONE} 1"));
    a.op(format!("COPY {COUNT} c0"));
    decode_rational(&mut a, "dec", "done");
    a.label("done");
    a.op(format!("OUTPUT {COEF}..{COEF}"));
    a.finish()
}

/// Input n; output the coefficients (c_0, …, c_L) of the n-th nonzero
/// polynomial, written left to right from cell 1.
pub fn qx_enumerator() -> String {
    let mut a = Asm::new("qx_enumerator", "1");
    constants(&mut a);
    a.op(format!("COPY {LOOPS} c0"));
    a.label("count");
    a.op(format!("BRANCH {LOOPS} walk walk step"));
    a.label("step");
    a.op(format!("SUB {LOOPS} {LOOPS} {ONE}"));
    advance_tick(&mut a, "tick", "count");
    walk_polynomial(&mut a, "walk", "emit", |a, ret| {
        a.op("SHIFTR");
        a.op(format!("COPY c0 {COEF}"));
        a.op(format!("JMP {ret}"));
    });
    a.label("emit");
    a.op("OUTPUT @1..c0");
    a.finish()
}

/// Semidecider for the real algebraic numbers: evaluates every nonzero
/// p ∈ ℚ[X] at the input in turn and halts, outputting the index of p,
/// as soon as p(x) = 0.
pub fn algebraic_semidecider() -> String {
    let mut a = Asm::new("algebraic_semidecider", "1");
    constants(&mut a);
    a.op(format!("CONST {INDEX} 0"));
    a.label("poly");
    a.op(format!("CONST {ACC} 0"));
    a.op(format!("CONST {XPOW} 1"));
    walk_polynomial(&mut a, "walk", "check", |a, ret| {
        a.op(format!("MUL {TMP} {COEF} {XPOW}"));
        a.op(format!("ADD {ACC} {ACC} {TMP}"));
        a.op(format!("MUL {XPOW} {XPOW} c0"));
        a.op(format!("JMP {ret}"));
    });
    a.label("check");
    a.op(format!("BRANCH {ACC} next found next"));
    a.label("next");
    a.op(format!("ADD {INDEX} {INDEX} {ONE}"));
    advance_tick(&mut a, "tick", "poly");
    a.label("found");
    a.op(format!("OUTPUT {INDEX}..{INDEX}"));
    a.finish()
}

/// Arity-2 search through nonzero q ∈ ℚ[Y1, Y2] that halts, outputting the
/// index of q, when q(x1, x2) = 0.
pub fn dependence() -> String {
    let mut a = Asm::new("dependence", "2");
    constants(&mut a);
    a.op(format!("CONST {INDEX} 0"));
    a.label("poly");
    a.op(format!("CONST {ACC} 0"));
    a.op(format!("CONST {EXP1} 0"));
    a.op(format!("CONST {EXP2} 0"));
    walk_polynomial(&mut a, "walk", "check", |a, ret| {
        a.note("monomial x1^e1 * x2^e2 by repeated multiplication");
        a.op(format!("CONST {MONO} 1"));
        a.op(format!("COPY {K1} {EXP1}"));
        a.label("m1");
        a.op(format!("BRANCH {K1} m2 m2 m1_mul"));
        a.label("m1_mul");
        a.op(format!("MUL {MONO} {MONO} c0"));
        a.op(format!("SUB {K1} {K1} {ONE}"));
        a.op("JMP m1");
        a.label("m2");
        a.op(format!("COPY {K2} {EXP2}"));
        a.label("m2_loop");
        a.op(format!("BRANCH {K2} add add m2_mul"));
        a.label("m2_mul");
        a.op(format!("MUL {MONO} {MONO} c1"));
        a.op(format!("SUB {K2} {K2} {ONE}"));
        a.op("JMP m2_loop");
        a.label("add");
        a.op(format!("MUL {TMP} {COEF} {MONO}"));
        a.op(format!("ADD {ACC} {ACC} {TMP}"));
        a.note("next monomial in graded order");
        a.op(format!("BRANCH {EXP1} degree degree slide"));
        a.label("slide");
        a.op(format!("SUB {EXP1} {EXP1} {ONE}"));
        a.op(format!("ADD {EXP2} {EXP2} {ONE}"));
        a.op(format!("JMP {ret}"));
        a.label("degree");
        a.op(format!("ADD {EXP1} {EXP2} {ONE}"));
        a.op(format!("CONST {EXP2} 0"));
        a.op(format!("JMP {ret}"));
    });
    a.label("check");
    a.op(format!("BRANCH {ACC} next found next"));
    a.label("next");
    a.op(format!("ADD {INDEX} {INDEX} {ONE}"));
    advance_tick(&mut a, "tick", "poly");
    a.label("found");
    a.op(format!("OUTPUT {INDEX}..{INDEX}"));
    a.finish()
}
