//! Path trees: purely symbolic execution that forks on every branch whose
//! outcome depends on the input.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::arith::{AlgebraicNumber, ArithOp, FieldRef, MultiPoly, RationalFunction, Sign};
use crate::machine::exec::{check_arity, sign_index};
use crate::machine::{
    oracle_query, Configuration, Effect, FaultKind, Instruction, MachineError, Oracle, PathEvent, Program, ValueOps,
};

use super::shadow::coefficient_field;

/// What to do at an oracle query whose tuple depends on the input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OraclePolicy {
    /// Take the oracle's generic answer without forking.
    Generic,
    /// Fork into a yes and a no branch.
    Both,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub function: RationalFunction,
    pub sign: Sign,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct PathCondition {
    pub constraints: Vec<Constraint>,
    pub oracle_assumptions: Vec<(Vec<RationalFunction>, bool)>,
    /// Divisors the path divides by, required to be nonzero.
    pub guards: Vec<RationalFunction>,
}

impl PathCondition {
    /// Whether `point` meets every sign constraint and guard. Oracle
    /// assumptions are not checked here.
    pub fn satisfied_by(&self, point: &[AlgebraicNumber]) -> bool {
        self.constraints.iter().all(|c| c.function.eval(point).map(|v| v.sign() == c.sign).unwrap_or(false))
            && self.guards.iter().all(|g| g.eval(point).map(|v| !v.is_zero()).unwrap_or(false))
    }

    /// Sign of `f` already implied by a constraint on a positive or negative
    /// constant multiple of it.
    fn known_sign(&self, f: &RationalFunction) -> Option<Sign> {
        let (key, factor) = normalize(f);
        self.constraints.iter().find_map(|c| {
            let (k, cf) = normalize(&c.function);
            (k == key).then(|| times(times(c.sign, cf), factor))
        })
    }
}

/// `f = c·g` with `g` having a numerator of leading coefficient 1; returns
/// `g` and the sign of `c`.
fn normalize(f: &RationalFunction) -> (RationalFunction, Sign) {
    let lc = f.numerator().leading_coeff().expect("nonzero function");
    let g = RationalFunction::new(f.numerator().monic(), f.denominator().clone()).expect("nonzero denominator");
    (g, lc.sign())
}

fn times(a: Sign, b: Sign) -> Sign {
    Sign::from_i8(a.as_i8() * b.as_i8()).expect("product of signs")
}

#[derive(Clone, Debug, PartialEq)]
pub enum LeafOutcome {
    Halted(Vec<RationalFunction>),
    /// Fork depth or per-path step cap reached.
    BudgetExhausted,
    Fault(FaultKind),
}

#[derive(Clone, Debug, PartialEq)]
pub struct PathLeaf {
    pub history: Vec<PathEvent>,
    pub condition: PathCondition,
    pub outcome: LeafOutcome,
    pub steps: u64,
    /// Some constraint requires a nonconstant function to vanish.
    pub measure_zero: bool,
}

impl PathLeaf {
    pub fn halted(&self) -> bool {
        matches!(self.outcome, LeafOutcome::Halted(_))
    }

    pub fn outputs(&self) -> Option<&[RationalFunction]> {
        match &self.outcome {
            LeafOutcome::Halted(o) => Some(o),
            _ => None,
        }
    }
}

/// Leaves in branch order (−, 0, + and yes, no at every fork).
#[derive(Clone, Debug, PartialEq)]
pub struct PathTree {
    pub program: String,
    pub nvars: usize,
    pub depth_budget: usize,
    pub forks: usize,
    pub leaves: Vec<PathLeaf>,
}

impl PathTree {
    pub fn halted_leaves(&self) -> impl Iterator<Item = &PathLeaf> {
        self.leaves.iter().filter(|l| l.halted())
    }

    /// Halted leaves whose condition `point` satisfies.
    pub fn matching_leaves(&self, point: &[AlgebraicNumber]) -> Vec<&PathLeaf> {
        self.halted_leaves().filter(|l| l.condition.satisfied_by(point)).collect()
    }

    pub fn to_json(&self) -> PathTreeJson {
        PathTreeJson {
            program: self.program.clone(),
            nvars: self.nvars,
            depth_budget: self.depth_budget,
            forks: self.forks,
            leaves: self
                .leaves
                .iter()
                .map(|l| LeafJson {
                    history: l.history.clone(),
                    constraints: l
                        .condition
                        .constraints
                        .iter()
                        .map(|c| ConstraintJson { function: c.function.to_string(), sign: c.sign })
                        .collect(),
                    oracle_assumptions: l
                        .condition
                        .oracle_assumptions
                        .iter()
                        .map(|(t, a)| OracleAssumptionJson {
                            query: t.iter().map(|f| f.to_string()).collect(),
                            answer: *a,
                        })
                        .collect(),
                    guards: l.condition.guards.iter().map(|g| g.to_string()).collect(),
                    status: match &l.outcome {
                        LeafOutcome::Halted(_) => "halted".into(),
                        LeafOutcome::BudgetExhausted => "budget_exhausted".into(),
                        LeafOutcome::Fault(f) => {
                            format!("fault:{}", serde_json::to_value(f).unwrap().as_str().unwrap())
                        }
                    },
                    outputs: l.outputs().map(|o| o.iter().map(|f| f.to_string()).collect()),
                    steps: l.steps,
                    measure_zero: l.measure_zero,
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstraintJson {
    pub function: String,
    pub sign: Sign,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleAssumptionJson {
    pub query: Vec<String>,
    pub answer: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LeafJson {
    pub history: Vec<PathEvent>,
    pub constraints: Vec<ConstraintJson>,
    pub oracle_assumptions: Vec<OracleAssumptionJson>,
    pub guards: Vec<String>,
    pub status: String,
    pub outputs: Option<Vec<String>>,
    pub steps: u64,
    pub measure_zero: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PathTreeJson {
    pub program: String,
    pub nvars: usize,
    pub depth_budget: usize,
    pub forks: usize,
    pub leaves: Vec<LeafJson>,
}

struct FunctionOps {
    field: FieldRef,
    nvars: usize,
}

impl ValueOps for FunctionOps {
    type Value = RationalFunction;

    fn constant(&self, c: &AlgebraicNumber) -> RationalFunction {
        RationalFunction::constant(
            &c.lift_to(&self.field).expect("coefficient field contains every constant"),
            self.nvars,
        )
    }

    fn arith(&self, op: ArithOp, a: &RationalFunction, b: &RationalFunction) -> Result<RationalFunction, FaultKind> {
        Ok(match op {
            ArithOp::Add => a.add(b),
            ArithOp::Sub => a.sub(b),
            ArithOp::Mul => a.mul(b),
            ArithOp::Div => a.div(b).map_err(|_| FaultKind::DivisionByZero)?,
        })
    }
}

#[derive(Clone)]
struct State {
    cfg: Configuration<RationalFunction>,
    condition: PathCondition,
    history: Vec<PathEvent>,
    forks: usize,
}

/// Explores every path of `prog` on symbolic inputs `Y1..Yk`.
///
/// A branch on a constant function, or on one whose sign the path already
/// fixes, follows the forced direction. Any other branch forks three ways
/// and counts against `depth_budget`; so does an oracle fork under
/// [`OraclePolicy::Both`]. Paths stop at `depth_budget` forks or after
/// `step_cap` steps, as budget-exhausted leaves.
pub fn explore_paths(
    prog: &Program,
    arity: usize,
    oracle: &Oracle,
    policy: OraclePolicy,
    depth_budget: usize,
    step_cap: u64,
) -> Result<PathTree, MachineError> {
    check_arity(prog, arity)?;
    let field = coefficient_field(prog)?;
    let ops = FunctionOps { field: field.clone(), nvars: arity };
    let inputs = (0..arity).map(|i| RationalFunction::var(&field, arity, i)).collect();
    let mut tree =
        PathTree { program: prog.name().to_string(), nvars: arity, depth_budget, forks: 0, leaves: Vec::new() };
    let mut stack = vec![State {
        cfg: Configuration::initial(inputs),
        condition: PathCondition::default(),
        history: Vec::new(),
        forks: 0,
    }];
    while let Some(mut st) = stack.pop() {
        let leaf = |st: State, outcome: LeafOutcome| {
            let measure_zero = st.condition.constraints.iter().any(|c| c.sign == Sign::Zero);
            PathLeaf { history: st.history, condition: st.condition, outcome, steps: st.cfg.steps, measure_zero }
        };
        loop {
            if st.cfg.pc >= prog.len() {
                tree.leaves.push(leaf(st, LeafOutcome::Halted(Vec::new())));
                break;
            }
            if st.cfg.steps >= step_cap {
                tree.leaves.push(leaf(st, LeafOutcome::BudgetExhausted));
                break;
            }
            let pc = st.cfg.pc;
            let divisor = match &prog.instructions()[pc] {
                Instruction::Arith { op: ArithOp::Div, b, .. } => st.cfg.cells.get(&b.resolve(st.cfg.head)).cloned(),
                _ => None,
            };
            let effect = st.cfg.step(prog, &ops);
            st.cfg.steps += 1;
            match effect {
                Effect::Continue(_) => {
                    if let Some(d) = divisor.filter(|d| !d.is_constant()) {
                        if !st.condition.guards.contains(&d) {
                            st.condition.guards.push(d);
                        }
                    }
                }
                Effect::Branch { value, targets } => {
                    let forced = value.constant_sign().or_else(|| st.condition.known_sign(&value));
                    if let Some(sign) = forced {
                        st.history.push(PathEvent::Branch { pc, sign });
                        st.cfg.pc = targets[sign_index(sign)];
                        continue;
                    }
                    if st.forks >= depth_budget {
                        tree.leaves.push(leaf(st, LeafOutcome::BudgetExhausted));
                        break;
                    }
                    tree.forks += 1;
                    // pushed in reverse so the stack pops −, 0, +
                    for sign in [Sign::Positive, Sign::Zero, Sign::Negative] {
                        let mut child = st.clone();
                        child.forks += 1;
                        child.condition.constraints.push(Constraint { function: value.clone(), sign });
                        child.history.push(PathEvent::Branch { pc, sign });
                        child.cfg.pc = targets[sign_index(sign)];
                        stack.push(child);
                    }
                    break;
                }
                Effect::Oracle { tuple, yes, no } => {
                    if tuple.iter().all(RationalFunction::is_constant) {
                        let values: Vec<AlgebraicNumber> = tuple.iter().map(|f| f.constant_value().unwrap()).collect();
                        match oracle_query(oracle, &values) {
                            Ok(answer) => {
                                st.history.push(PathEvent::Oracle { pc, answer });
                                st.cfg.pc = if answer { yes } else { no };
                                continue;
                            }
                            Err(_) => {
                                tree.leaves.push(leaf(st, LeafOutcome::Fault(FaultKind::OracleUnsupported)));
                                break;
                            }
                        }
                    }
                    let assumed = st.condition.oracle_assumptions.iter().find(|(t, _)| *t == tuple).map(|(_, a)| *a);
                    let answer = assumed.or((policy == OraclePolicy::Generic).then_some(oracle.generic_policy));
                    if let Some(answer) = answer {
                        if assumed.is_none() {
                            st.condition.oracle_assumptions.push((tuple, answer));
                        }
                        st.history.push(PathEvent::Oracle { pc, answer });
                        st.cfg.pc = if answer { yes } else { no };
                        continue;
                    }
                    if st.forks >= depth_budget {
                        tree.leaves.push(leaf(st, LeafOutcome::BudgetExhausted));
                        break;
                    }
                    tree.forks += 1;
                    for answer in [false, true] {
                        let mut child = st.clone();
                        child.forks += 1;
                        child.condition.oracle_assumptions.push((tuple.clone(), answer));
                        child.history.push(PathEvent::Oracle { pc, answer });
                        child.cfg.pc = if answer { yes } else { no };
                        stack.push(child);
                    }
                    break;
                }
                Effect::Halt(out) => {
                    tree.leaves.push(leaf(st, LeafOutcome::Halted(out)));
                    break;
                }
                Effect::Fault(f) => {
                    tree.leaves.push(leaf(st, LeafOutcome::Fault(f)));
                    break;
                }
            }
        }
    }
    Ok(tree)
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum BoundaryError {
    #[error("leaf {0} did not halt")]
    NotHalted(usize),
    #[error("leaf {0} does not output a single constant")]
    NonConstantOutput(usize),
}

/// Polynomials whose zero sets cover the boundary of the set a path tree
/// decides: numerators of constraint functions that are required to vanish
/// on some leaf or that separate two leaves with different outputs. Each
/// polynomial is made monic; the list is deduplicated and sorted by text.
pub fn boundary_report(tree: &PathTree) -> Result<Vec<MultiPoly>, BoundaryError> {
    let mut outputs = Vec::new();
    for (i, leaf) in tree.leaves.iter().enumerate() {
        let out = leaf.outputs().ok_or(BoundaryError::NotHalted(i))?;
        match out {
            [f] if f.is_constant() => outputs.push(f.constant_value().unwrap()),
            _ => return Err(BoundaryError::NonConstantOutput(i)),
        }
    }
    let mut found: BTreeMap<String, MultiPoly> = BTreeMap::new();
    let mut add = |f: &RationalFunction| {
        let p = f.numerator().monic();
        found.insert(p.to_string(), p);
    };
    let signed: Vec<Vec<(RationalFunction, Sign)>> = tree
        .leaves
        .iter()
        .map(|l| {
            l.condition
                .constraints
                .iter()
                .map(|c| {
                    let (g, s) = normalize(&c.function);
                    (g, times(c.sign, s))
                })
                .collect()
        })
        .collect();
    for c in tree.leaves.iter().flat_map(|l| &l.condition.constraints) {
        if c.sign == Sign::Zero {
            add(&c.function);
        }
    }
    for i in 0..tree.leaves.len() {
        for j in i + 1..tree.leaves.len() {
            if outputs[i] == outputs[j] {
                continue;
            }
            for (g, s) in &signed[i] {
                if signed[j].iter().any(|(h, t)| h == g && t != s) {
                    add(g);
                }
            }
        }
    }
    Ok(found.into_values().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat, NumberField};
    use crate::machine::parse_program;
    use crate::stdlib::stdlib_program;

    fn q(r: crate::arith::Rational) -> AlgebraicNumber {
        AlgebraicNumber::rational(r)
    }

    #[test]
    fn sgn_has_three_leaves() {
        let p = stdlib_program("sgn", &[]).unwrap();
        let t = explore_paths(&p, 1, &Oracle::empty(), OraclePolicy::Generic, 10, 1000).unwrap();
        assert_eq!(t.leaves.len(), 3);
        let outs: Vec<AlgebraicNumber> =
            t.leaves.iter().map(|l| l.outputs().unwrap()[0].constant_value().unwrap()).collect();
        assert_eq!(outs, vec![q(int(-1)), q(int(0)), q(int(1))]);
        assert!(t.leaves[1].measure_zero && !t.leaves[0].measure_zero);
        let y = RationalFunction::var(&NumberField::rationals(), 1, 0);
        assert_eq!(t.leaves[2].condition.constraints, vec![Constraint { function: y, sign: Sign::Positive }]);
    }

    #[test]
    fn constant_program_single_leaf() {
        let p = stdlib_program("m_const", &[]).unwrap();
        let t = explore_paths(&p, 2, &Oracle::empty(), OraclePolicy::Generic, 10, 1000).unwrap();
        assert_eq!(t.leaves.len(), 1);
        assert!(t.leaves[0].condition.constraints.is_empty());
        assert!(boundary_report(&t).unwrap().is_empty());
    }

    #[test]
    fn repeated_branch_is_forced() {
        let src = "PROGRAM twice\nARITY 1\n  CONST c1 2\n  MUL c2 c0 c1\n  BRANCH c0 a b c\na: BRANCH c2 x y z\nb: JMP z\nc: JMP z\nx: OUTPUT c0..c0\ny: OUTPUT c0..c0\nz: OUTPUT c0..c0\n";
        let p = parse_program(src).unwrap();
        let t = explore_paths(&p, 1, &Oracle::empty(), OraclePolicy::Generic, 10, 1000).unwrap();
        assert_eq!(t.forks, 1);
        assert_eq!(t.leaves.len(), 3);
        assert_eq!(t.leaves[0].history.len(), 2);
    }

    #[test]
    fn interval_member_boundary() {
        let p = stdlib_program("interval_member", &[rat(1, 2), int(1)]).unwrap();
        let t = explore_paths(&p, 1, &Oracle::empty(), OraclePolicy::Generic, 20, 1000).unwrap();
        let b = boundary_report(&t).unwrap();
        let texts: Vec<String> = b.iter().map(|p| p.to_string()).collect();
        assert_eq!(texts, vec!["Y - 1", "Y - 1/2"]);
    }

    #[test]
    fn oracle_forks_under_both() {
        let p = stdlib_program("m_toy", &[]).unwrap();
        let generic = explore_paths(&p, 2, &Oracle::rationals(), OraclePolicy::Generic, 5, 100).unwrap();
        assert_eq!(generic.leaves.len(), 1);
        assert_eq!(generic.leaves[0].outputs().unwrap()[0].constant_value(), Some(q(int(0))));
        let both = explore_paths(&p, 2, &Oracle::rationals(), OraclePolicy::Both, 5, 100).unwrap();
        assert_eq!(both.leaves.len(), 2);
        assert_eq!(both.leaves[0].history, vec![PathEvent::Oracle { pc: 0, answer: true }]);
    }
}
