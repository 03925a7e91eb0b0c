//! Shadow execution: the concrete run, with every cell also carried as a
//! rational function of the input indeterminates.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::arith::{field_arith, AlgebraicNumber, ArithError, ArithOp, FieldRef, RationalFunction, Sign};
use crate::machine::exec::{check_arity, sign_index};
use crate::machine::{
    oracle_query, run_field, Configuration, Effect, FaultKind, Instruction, MachineError, Oracle, PathEvent, Program,
    ValueOps,
};

/// How oracle forks are resolved during a shadow run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleMode {
    /// Ask the oracle about the concrete query.
    Concrete,
    /// Constant queries go to the oracle; nonconstant ones get the oracle's
    /// generic answer.
    Generic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShadowValue {
    pub value: AlgebraicNumber,
    pub function: RationalFunction,
}

pub(crate) struct ShadowOps {
    pub run_field: FieldRef,
    pub coeff_field: FieldRef,
    pub nvars: usize,
}

impl ValueOps for ShadowOps {
    type Value = ShadowValue;

    fn constant(&self, c: &AlgebraicNumber) -> ShadowValue {
        ShadowValue {
            value: c.lift_to(&self.run_field).expect("run field contains every constant"),
            function: RationalFunction::constant(
                &c.lift_to(&self.coeff_field).expect("coefficient field contains every constant"),
                self.nvars,
            ),
        }
    }

    fn arith(&self, op: ArithOp, a: &ShadowValue, b: &ShadowValue) -> Result<ShadowValue, FaultKind> {
        let value = match field_arith(&a.value, &b.value, op) {
            Ok(v) => v,
            Err(ArithError::DivisionByZero) => return Err(FaultKind::DivisionByZero),
            Err(e) => panic!("arithmetic inside the run field failed: {e}"),
        };
        let function = match op {
            ArithOp::Add => a.function.add(&b.function),
            ArithOp::Sub => a.function.sub(&b.function),
            ArithOp::Mul => a.function.mul(&b.function),
            // the concrete divisor is nonzero, so the divisor function is too
            ArithOp::Div => a.function.div(&b.function).expect("nonzero divisor"),
        };
        Ok(ShadowValue { value, function })
    }
}

/// The field of a program's parameters and literals, which holds every
/// coefficient of every cell function.
pub fn coefficient_field(prog: &Program) -> Result<FieldRef, MachineError> {
    run_field(prog, &[])
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShadowWrite {
    pub cell: i64,
    pub value: AlgebraicNumber,
    pub function: RationalFunction,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShadowStep {
    pub step: u64,
    pub pc: usize,
    pub writes: Vec<ShadowWrite>,
    pub branch: Option<Sign>,
    pub oracle: Option<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BranchRecord {
    pub step: u64,
    pub pc: usize,
    pub function: RationalFunction,
    pub value: AlgebraicNumber,
    pub sign: Sign,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleRecord {
    pub step: u64,
    pub pc: usize,
    pub functions: Vec<RationalFunction>,
    pub values: Vec<AlgebraicNumber>,
    pub answer: bool,
    pub was_constant: bool,
}

/// A division by a nonconstant function: the run relies on it being nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct GuardRecord {
    pub step: u64,
    pub pc: usize,
    pub function: RationalFunction,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ShadowOutcome {
    Halted { functions: Vec<RationalFunction>, values: Vec<AlgebraicNumber> },
    BudgetExhausted,
    Fault(FaultKind),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymbolicTrace {
    pub program: String,
    pub input: Vec<AlgebraicNumber>,
    pub nvars: usize,
    pub coeff_field: FieldRef,
    pub mode: OracleMode,
    pub steps: Vec<ShadowStep>,
    pub branch_log: Vec<BranchRecord>,
    pub oracle_log: Vec<OracleRecord>,
    pub guards: Vec<GuardRecord>,
    pub outcome: ShadowOutcome,
}

impl SymbolicTrace {
    pub fn halted(&self) -> bool {
        matches!(self.outcome, ShadowOutcome::Halted { .. })
    }

    pub fn step_count(&self) -> u64 {
        self.steps.len() as u64
    }

    pub fn output_functions(&self) -> Option<&[RationalFunction]> {
        match &self.outcome {
            ShadowOutcome::Halted { functions, .. } => Some(functions),
            _ => None,
        }
    }

    pub fn output_values(&self) -> Option<&[AlgebraicNumber]> {
        match &self.outcome {
            ShadowOutcome::Halted { values, .. } => Some(values),
            _ => None,
        }
    }

    pub fn history(&self) -> Vec<PathEvent> {
        self.steps
            .iter()
            .filter_map(|s| match (s.branch, s.oracle) {
                (Some(sign), _) => Some(PathEvent::Branch { pc: s.pc, sign }),
                (_, Some(answer)) => Some(PathEvent::Oracle { pc: s.pc, answer }),
                _ => None,
            })
            .collect()
    }

    /// Cell contents after `steps[..n]`, input cells included.
    pub fn cells_after(&self, n: usize) -> BTreeMap<i64, ShadowValue> {
        let mut cells = BTreeMap::new();
        for (i, v) in self.input.iter().enumerate() {
            let function = RationalFunction::var(&self.coeff_field, self.nvars, i);
            cells.insert(i as i64, ShadowValue { value: v.clone(), function });
        }
        for s in &self.steps[..n] {
            for w in &s.writes {
                cells.insert(w.cell, ShadowValue { value: w.value.clone(), function: w.function.clone() });
            }
        }
        cells
    }

    /// True when some branch took the zero direction on a nonconstant function.
    pub fn has_equality_branch(&self) -> bool {
        self.branch_log.iter().any(|b| b.sign == Sign::Zero && !b.function.is_constant())
    }

    pub fn to_json(&self, prog: &Program) -> SymbolicTraceJson {
        let text = |v: &AlgebraicNumber| v.to_string();
        SymbolicTraceJson {
            program: self.program.clone(),
            input: self.input.iter().map(text).collect(),
            oracle_mode: self.mode,
            steps: self
                .steps
                .iter()
                .map(|s| ShadowStepJson {
                    step: s.step,
                    pc: s.pc,
                    instr: prog.instruction_text(s.pc),
                    writes: s
                        .writes
                        .iter()
                        .map(|w| ShadowWriteJson {
                            cell: w.cell,
                            value: text(&w.value),
                            function: w.function.to_string(),
                        })
                        .collect(),
                    branch: s.branch,
                    oracle: s.oracle,
                })
                .collect(),
            branch_log: self
                .branch_log
                .iter()
                .map(|b| BranchJson { step: b.step, pc: b.pc, function: b.function.to_string(), sign: b.sign })
                .collect(),
            oracle_log: self
                .oracle_log
                .iter()
                .map(|o| OracleLogJson {
                    step: o.step,
                    pc: o.pc,
                    functions: o.functions.iter().map(|f| f.to_string()).collect(),
                    answer: o.answer,
                    was_constant: o.was_constant,
                })
                .collect(),
            guards: self.guards.iter().map(|g| g.function.to_string()).collect(),
            outcome: match &self.outcome {
                ShadowOutcome::Halted { functions, values } => OutcomeJson {
                    status: "halted".into(),
                    output_functions: Some(functions.iter().map(|f| f.to_string()).collect()),
                    output_values: Some(values.iter().map(text).collect()),
                    fault: None,
                },
                ShadowOutcome::BudgetExhausted => OutcomeJson {
                    status: "budget_exhausted".into(),
                    output_functions: None,
                    output_values: None,
                    fault: None,
                },
                ShadowOutcome::Fault(f) => {
                    OutcomeJson { status: "fault".into(), output_functions: None, output_values: None, fault: Some(*f) }
                }
            },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ShadowWriteJson {
    pub cell: i64,
    pub value: String,
    pub function: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ShadowStepJson {
    pub step: u64,
    pub pc: usize,
    pub instr: String,
    pub writes: Vec<ShadowWriteJson>,
    pub branch: Option<Sign>,
    pub oracle: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BranchJson {
    pub step: u64,
    pub pc: usize,
    pub function: String,
    pub sign: Sign,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleLogJson {
    pub step: u64,
    pub pc: usize,
    pub functions: Vec<String>,
    pub answer: bool,
    pub was_constant: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct OutcomeJson {
    pub status: String,
    pub output_functions: Option<Vec<String>>,
    pub output_values: Option<Vec<String>>,
    pub fault: Option<FaultKind>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SymbolicTraceJson {
    pub program: String,
    pub input: Vec<String>,
    pub oracle_mode: OracleMode,
    pub steps: Vec<ShadowStepJson>,
    pub branch_log: Vec<BranchJson>,
    pub oracle_log: Vec<OracleLogJson>,
    pub guards: Vec<String>,
    pub outcome: OutcomeJson,
}

/// Runs `prog` on `input` exactly while tracking each cell as a rational
/// function of indeterminates `Y1..Yk` standing for the inputs.
pub fn shadow_trace(
    prog: &Program,
    input: &[AlgebraicNumber],
    oracle: &Oracle,
    mode: OracleMode,
    budget: u64,
) -> Result<SymbolicTrace, MachineError> {
    check_arity(prog, input.len())?;
    let run_field = run_field(prog, input)?;
    let coeff_field = coefficient_field(prog)?;
    let nvars = input.len();
    let ops = ShadowOps { run_field: run_field.clone(), coeff_field: coeff_field.clone(), nvars };
    let inputs = input
        .iter()
        .enumerate()
        .map(|(i, v)| ShadowValue {
            value: v.lift_to(&run_field).expect("run field contains the inputs"),
            function: RationalFunction::var(&coeff_field, nvars, i),
        })
        .collect();
    let mut cfg = Configuration::initial(inputs);
    let mut trace = SymbolicTrace {
        program: prog.name().to_string(),
        input: input.to_vec(),
        nvars,
        coeff_field: coeff_field.clone(),
        mode,
        steps: Vec::new(),
        branch_log: Vec::new(),
        oracle_log: Vec::new(),
        guards: Vec::new(),
        outcome: ShadowOutcome::BudgetExhausted,
    };
    loop {
        if cfg.pc >= prog.len() {
            trace.outcome = ShadowOutcome::Halted { functions: Vec::new(), values: Vec::new() };
            return Ok(trace);
        }
        if cfg.steps >= budget {
            trace.outcome = ShadowOutcome::BudgetExhausted;
            return Ok(trace);
        }
        let pc = cfg.pc;
        let step = cfg.steps;
        let divisor = match &prog.instructions()[pc] {
            Instruction::Arith { op: ArithOp::Div, b, .. } => cfg.cells.get(&b.resolve(cfg.head)).cloned(),
            _ => None,
        };
        let effect = cfg.step(prog, &ops);
        cfg.steps += 1;
        let mut rec = ShadowStep { step, pc, writes: Vec::new(), branch: None, oracle: None };
        let mut done = None;
        match effect {
            Effect::Continue(writes) => {
                if let Some(d) = divisor.filter(|d| !d.function.is_constant()) {
                    trace.guards.push(GuardRecord { step, pc, function: d.function });
                }
                rec.writes = writes
                    .into_iter()
                    .map(|(cell, v)| ShadowWrite { cell, value: v.value, function: v.function })
                    .collect();
            }
            Effect::Branch { value, targets } => {
                let sign = value.value.sign();
                rec.branch = Some(sign);
                trace.branch_log.push(BranchRecord { step, pc, function: value.function, value: value.value, sign });
                cfg.pc = targets[sign_index(sign)];
            }
            Effect::Oracle { tuple, yes, no } => {
                let was_constant = tuple.iter().all(|v| v.function.is_constant());
                let values: Vec<AlgebraicNumber> = tuple.iter().map(|v| v.value.clone()).collect();
                let answer = if mode == OracleMode::Generic && !was_constant {
                    Ok(oracle.generic_policy)
                } else {
                    oracle_query(oracle, &values)
                };
                match answer {
                    Ok(answer) => {
                        rec.oracle = Some(answer);
                        trace.oracle_log.push(OracleRecord {
                            step,
                            pc,
                            functions: tuple.into_iter().map(|v| v.function).collect(),
                            values,
                            answer,
                            was_constant,
                        });
                        cfg.pc = if answer { yes } else { no };
                    }
                    Err(_) => done = Some(ShadowOutcome::Fault(FaultKind::OracleUnsupported)),
                }
            }
            Effect::Halt(out) => {
                let (functions, values) = out.into_iter().map(|v| (v.function, v.value)).unzip();
                done = Some(ShadowOutcome::Halted { functions, values });
            }
            Effect::Fault(f) => done = Some(ShadowOutcome::Fault(f)),
        }
        trace.steps.push(rec);
        if let Some(outcome) = done {
            trace.outcome = outcome;
            return Ok(trace);
        }
    }
}

/// Nonconstant functions the run's control flow depends on: branch
/// functions, oracle query components and divisors. Deduplicated, in
/// first-use order. `None` for a run that did not halt.
pub fn extract_f(trace: &SymbolicTrace) -> Option<Vec<RationalFunction>> {
    if !trace.halted() {
        return None;
    }
    let mut found: Vec<(u64, &RationalFunction)> = Vec::new();
    found.extend(trace.branch_log.iter().map(|b| (b.step, &b.function)));
    for o in &trace.oracle_log {
        found.extend(o.functions.iter().map(|f| (o.step, f)));
    }
    found.extend(trace.guards.iter().map(|g| (g.step, &g.function)));
    found.sort_by_key(|(s, _)| *s);
    let mut out: Vec<RationalFunction> = Vec::new();
    for (_, f) in found {
        if !f.is_constant() && !out.contains(f) {
            out.push(f.clone());
        }
    }
    Some(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FieldBoundaryReport {
    pub cells_checked: usize,
    /// Largest degree over ℚ among the concrete cell values.
    pub max_degree: usize,
    pub violations: Vec<String>,
}

impl FieldBoundaryReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that every traced cell function has coefficients in the
/// program's coefficient field and evaluates at the input to the concrete
/// cell value.
pub fn field_boundary_check(trace: &SymbolicTrace) -> FieldBoundaryReport {
    let mut report = FieldBoundaryReport { cells_checked: 0, max_degree: 0, violations: Vec::new() };
    let in_field = |f: &RationalFunction| {
        [f.numerator(), f.denominator()]
            .into_iter()
            .all(|p| p.field().same_as(&trace.coeff_field) || p.has_rational_coeffs())
    };
    for s in &trace.steps {
        for w in &s.writes {
            report.cells_checked += 1;
            if !in_field(&w.function) {
                report
                    .violations
                    .push(format!("step {}: cell {} has coefficients outside the coefficient field", s.step, w.cell));
            }
            match w.function.eval(&trace.input) {
                Ok(v) if v == w.value => {}
                Ok(v) => report.violations.push(format!(
                    "step {}: cell {} function {} gives {v}, concrete value {}",
                    s.step, w.cell, w.function, w.value
                )),
                Err(e) => report.violations.push(format!("step {}: cell {} does not evaluate: {e}", s.step, w.cell)),
            }
            let degree = if w.value.is_rational() { 1 } else { crate::arith::degree_over_q(&w.value) };
            report.max_degree = report.max_degree.max(degree);
        }
    }
    report
}

/// Compares a shadow trace with an independent concrete trace step by step.
pub fn shadow_agreement(trace: &SymbolicTrace, concrete: &crate::machine::Trace) -> Result<(), String> {
    if trace.steps.len() != concrete.steps.len() {
        return Err(format!("{} shadow steps, {} concrete steps", trace.steps.len(), concrete.steps.len()));
    }
    for (s, c) in trace.steps.iter().zip(&concrete.steps) {
        if s.pc != c.pc || s.branch != c.branch || s.writes.len() != c.writes.len() {
            return Err(format!("step {}: control flow differs", s.step));
        }
        for (w, (cell, v)) in s.writes.iter().zip(&c.writes) {
            let at_input = w.function.eval(&trace.input).map_err(|e| format!("step {}: {e}", s.step))?;
            if w.cell != *cell || at_input != *v {
                return Err(format!(
                    "step {}: cell {} function {} gives {at_input}, concrete {v}",
                    s.step, cell, w.function
                ));
            }
        }
    }
    Ok(())
}
