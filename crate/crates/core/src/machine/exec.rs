//! Small-step execution over an abstract value domain, and the concrete
//! interpreter built on it.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::{field_arith, AlgebraicNumber, ArithError, ArithOp, FieldRef, NumberField, Sign};

use super::oracle::{fmt_tuple, oracle_query, Oracle};
use super::program::{Arity, ConstSource, Instruction, Program, ShiftDir};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FaultKind {
    DivisionByZero,
    BlankRead,
    OracleUnsupported,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Halted,
    BudgetExhausted,
    Fault,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunResult {
    pub status: Status,
    pub output: Option<Vec<AlgebraicNumber>>,
    pub steps: u64,
    pub fault: Option<FaultKind>,
}

impl RunResult {
    pub fn halted(&self) -> bool {
        self.status == Status::Halted
    }

    pub fn summary(&self) -> String {
        match self.status {
            Status::Halted => format!(
                "halted after {} steps, output {}",
                self.steps,
                fmt_tuple(self.output.as_deref().unwrap_or(&[]))
            ),
            Status::BudgetExhausted => format!("budget exhausted after {} steps", self.steps),
            Status::Fault => format!("fault {:?} after {} steps", self.fault.unwrap(), self.steps),
        }
    }
}

/// Problems detected before the first step.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MachineError {
    #[error("program expects {expected} inputs, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("inputs and parameters do not share one number field")]
    FieldMismatch,
}

/// How a value domain realizes constants and arithmetic.
pub trait ValueOps {
    type Value: Clone;
    fn constant(&self, c: &AlgebraicNumber) -> Self::Value;
    fn arith(&self, op: ArithOp, a: &Self::Value, b: &Self::Value) -> Result<Self::Value, FaultKind>;
}

/// Machine state: sparse tape, head position, program counter, step count.
#[derive(Clone, Debug)]
pub struct Configuration<V> {
    pub cells: BTreeMap<i64, V>,
    pub head: i64,
    pub pc: usize,
    pub steps: u64,
}

/// What one instruction asks of the driver.
pub enum Effect<V> {
    /// Straight-line instruction done; `pc` already advanced.
    Continue(Vec<(i64, V)>),
    /// Three-way fork on the sign of `value`; targets are (neg, zero, pos).
    Branch {
        value: V,
        targets: [usize; 3],
    },
    Oracle {
        tuple: Vec<V>,
        yes: usize,
        no: usize,
    },
    Halt(Vec<V>),
    Fault(FaultKind),
}

impl<V: Clone> Configuration<V> {
    /// Inputs occupy cells `0..k` with the head on cell 0.
    pub fn initial(inputs: Vec<V>) -> Self {
        Configuration {
            cells: inputs.into_iter().enumerate().map(|(i, v)| (i as i64, v)).collect(),
            head: 0,
            pc: 0,
            steps: 0,
        }
    }

    fn read<O: ValueOps<Value = V>>(&self, prog: &Program, cell: i64, ops: &O) -> Result<V, FaultKind> {
        match self.cells.get(&cell) {
            Some(v) => Ok(v.clone()),
            None if prog.is_zero_initialized(cell) => Ok(ops.constant(&AlgebraicNumber::from_i64(0))),
            None => Err(FaultKind::BlankRead),
        }
    }

    fn read_range<O: ValueOps<Value = V>>(
        &self,
        prog: &Program,
        lo: i64,
        hi: i64,
        ops: &O,
    ) -> Result<Vec<V>, FaultKind> {
        (lo..=hi).map(|c| self.read(prog, c, ops)).collect()
    }

    /// Executes the instruction at `pc` (which must be in range) as far as
    /// the value domain allows on its own. Does not touch `steps`.
    pub fn step<O: ValueOps<Value = V>>(&mut self, prog: &Program, ops: &O) -> Effect<V> {
        let pc = self.pc;
        let head = self.head;
        let write = |cfg: &mut Self, cell: i64, v: V| {
            cfg.cells.insert(cell, v.clone());
            cfg.pc = pc + 1;
            Effect::Continue(vec![(cell, v)])
        };
        match &prog.instructions()[pc] {
            Instruction::Const { dst, src } => {
                let v = match src {
                    ConstSource::Literal(c) => ops.constant(c),
                    ConstSource::Param(i) => ops.constant(&prog.params()[*i].value),
                };
                write(self, dst.resolve(head), v)
            }
            Instruction::Copy { dst, src } => match self.read(prog, src.resolve(head), ops) {
                Ok(v) => write(self, dst.resolve(head), v),
                Err(f) => Effect::Fault(f),
            },
            Instruction::Arith { op, dst, a, b } => {
                let x = match self.read(prog, a.resolve(head), ops) {
                    Ok(v) => v,
                    Err(f) => return Effect::Fault(f),
                };
                let y = match self.read(prog, b.resolve(head), ops) {
                    Ok(v) => v,
                    Err(f) => return Effect::Fault(f),
                };
                match ops.arith(*op, &x, &y) {
                    Ok(v) => write(self, dst.resolve(head), v),
                    Err(f) => Effect::Fault(f),
                }
            }
            Instruction::Branch { src, neg, zero, pos } => match self.read(prog, src.resolve(head), ops) {
                Ok(value) => Effect::Branch { value, targets: [*neg, *zero, *pos] },
                Err(f) => Effect::Fault(f),
            },
            Instruction::Jmp { target } => {
                self.pc = *target;
                Effect::Continue(Vec::new())
            }
            Instruction::Shift(dir) => {
                self.head += match dir {
                    ShiftDir::Left => -1,
                    ShiftDir::Right => 1,
                };
                self.pc = pc + 1;
                Effect::Continue(Vec::new())
            }
            Instruction::Oracle { lo, hi, yes, no } => {
                match self.read_range(prog, lo.resolve(head), hi.resolve(head), ops) {
                    Ok(tuple) => Effect::Oracle { tuple, yes: *yes, no: *no },
                    Err(f) => Effect::Fault(f),
                }
            }
            Instruction::Output { lo, hi } => match self.read_range(prog, lo.resolve(head), hi.resolve(head), ops) {
                Ok(out) => Effect::Halt(out),
                Err(f) => Effect::Fault(f),
            },
        }
    }
}

pub fn sign_index(s: Sign) -> usize {
    match s {
        Sign::Negative => 0,
        Sign::Zero => 1,
        Sign::Positive => 2,
    }
}

/// The single number field holding every parameter, literal and input.
pub fn run_field(prog: &Program, input: &[AlgebraicNumber]) -> Result<FieldRef, MachineError> {
    let mut field: Option<FieldRef> = None;
    for v in prog.constants().chain(input.iter()) {
        if v.is_rational() {
            continue;
        }
        match &field {
            None => field = Some(v.field().clone()),
            Some(f) if f.same_as(v.field()) => {}
            Some(_) => return Err(MachineError::FieldMismatch),
        }
    }
    Ok(field.unwrap_or_else(NumberField::rationals))
}

pub fn check_arity(prog: &Program, n: usize) -> Result<(), MachineError> {
    match prog.arity() {
        Arity::Fixed(k) if k != n => Err(MachineError::ArityMismatch { expected: k, got: n }),
        _ => Ok(()),
    }
}

/// Exact arithmetic inside one number field.
pub struct ConcreteOps {
    pub field: FieldRef,
}

impl ValueOps for ConcreteOps {
    type Value = AlgebraicNumber;

    fn constant(&self, c: &AlgebraicNumber) -> AlgebraicNumber {
        c.lift_to(&self.field).expect("run field contains every constant")
    }

    fn arith(&self, op: ArithOp, a: &AlgebraicNumber, b: &AlgebraicNumber) -> Result<AlgebraicNumber, FaultKind> {
        match field_arith(a, b, op) {
            Ok(v) => Ok(v),
            Err(ArithError::DivisionByZero) => Err(FaultKind::DivisionByZero),
            Err(e) => panic!("arithmetic inside the run field failed: {e}"),
        }
    }
}

/// A fork taken during a run, identified by the instruction that forked.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PathEvent {
    Branch { pc: usize, sign: Sign },
    Oracle { pc: usize, answer: bool },
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceStep {
    pub step: u64,
    pub pc: usize,
    pub writes: Vec<(i64, AlgebraicNumber)>,
    pub branch: Option<Sign>,
    pub oracle: Option<(Vec<AlgebraicNumber>, bool)>,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Trace {
    pub input: Vec<AlgebraicNumber>,
    pub steps: Vec<TraceStep>,
}

impl Trace {
    pub fn history(&self) -> Vec<PathEvent> {
        self.steps
            .iter()
            .filter_map(|s| match (&s.branch, &s.oracle) {
                (Some(sign), _) => Some(PathEvent::Branch { pc: s.pc, sign: *sign }),
                (_, Some((_, answer))) => Some(PathEvent::Oracle { pc: s.pc, answer: *answer }),
                _ => None,
            })
            .collect()
    }

    /// One record per step: `step pc instr writes=[...] branch=<sign|-> oracle=<query->ans|->`.
    pub fn to_text(&self, prog: &Program) -> String {
        let mut out = String::new();
        for s in &self.steps {
            let writes: Vec<String> = s.writes.iter().map(|(c, v)| format!("@{c}={v}")).collect();
            let branch = s.branch.map_or("-".to_string(), |b| b.symbol().to_string());
            let oracle = match &s.oracle {
                Some((q, a)) => format!("{}->{}", fmt_tuple(q), if *a { "yes" } else { "no" }),
                None => "-".into(),
            };
            out.push_str(&format!(
                "{} {} {} writes=[{}] branch={} oracle={}\n",
                s.step,
                s.pc,
                prog.instruction_text(s.pc),
                writes.join(", "),
                branch,
                oracle
            ));
        }
        out
    }

    pub fn to_json(&self, prog: &Program) -> TraceJson {
        TraceJson {
            program: prog.name().to_string(),
            input: self.input.iter().map(|v| v.to_string()).collect(),
            steps: self
                .steps
                .iter()
                .map(|s| StepJson {
                    step: s.step,
                    pc: s.pc,
                    instr: prog.instruction_text(s.pc),
                    writes: s.writes.iter().map(|(c, v)| WriteJson { cell: *c, value: v.to_string() }).collect(),
                    branch: s.branch,
                    oracle: s
                        .oracle
                        .as_ref()
                        .map(|(q, a)| OracleJson { query: q.iter().map(|v| v.to_string()).collect(), answer: *a }),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WriteJson {
    pub cell: i64,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleJson {
    pub query: Vec<String>,
    pub answer: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepJson {
    pub step: u64,
    pub pc: usize,
    pub instr: String,
    pub writes: Vec<WriteJson>,
    pub branch: Option<Sign>,
    pub oracle: Option<OracleJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceJson {
    pub program: String,
    pub input: Vec<String>,
    pub steps: Vec<StepJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunResultJson {
    pub status: Status,
    pub output: Option<Vec<String>>,
    pub steps: u64,
    pub fault: Option<FaultKind>,
}

impl From<&RunResult> for RunResultJson {
    fn from(r: &RunResult) -> Self {
        RunResultJson {
            status: r.status,
            output: r.output.as_ref().map(|o| o.iter().map(|v| v.to_string()).collect()),
            steps: r.steps,
            fault: r.fault,
        }
    }
}

/// Runs `prog` on `input` with exact arithmetic, recording every step.
pub fn run_concrete(
    prog: &Program,
    input: &[AlgebraicNumber],
    oracle: &Oracle,
    budget: u64,
) -> Result<(RunResult, Trace), MachineError> {
    let mut trace = Trace { input: input.to_vec(), steps: Vec::new() };
    let result = drive(prog, input, oracle, budget, Some(&mut trace))?;
    Ok((result, trace))
}

/// Same as [`run_concrete`] without recording a trace.
pub fn run(prog: &Program, input: &[AlgebraicNumber], oracle: &Oracle, budget: u64) -> Result<RunResult, MachineError> {
    drive(prog, input, oracle, budget, None)
}

fn drive(
    prog: &Program,
    input: &[AlgebraicNumber],
    oracle: &Oracle,
    budget: u64,
    mut trace: Option<&mut Trace>,
) -> Result<RunResult, MachineError> {
    check_arity(prog, input.len())?;
    let field = run_field(prog, input)?;
    let ops = ConcreteOps { field };
    let inputs = input.iter().map(|v| ops.constant(v)).collect();
    let mut cfg = Configuration::initial(inputs);
    let finish = |status, output, steps, fault| RunResult { status, output, steps, fault };
    loop {
        if cfg.pc >= prog.len() {
            // Running past the last instruction halts with an empty output.
            return Ok(finish(Status::Halted, Some(Vec::new()), cfg.steps, None));
        }
        if cfg.steps >= budget {
            return Ok(finish(Status::BudgetExhausted, None, cfg.steps, None));
        }
        let pc = cfg.pc;
        let effect = cfg.step(prog, &ops);
        cfg.steps += 1;
        let mut rec = TraceStep { step: cfg.steps - 1, pc, writes: Vec::new(), branch: None, oracle: None };
        let outcome = match effect {
            Effect::Continue(writes) => {
                rec.writes = writes;
                None
            }
            Effect::Branch { value, targets } => {
                let s = value.sign();
                rec.branch = Some(s);
                cfg.pc = targets[sign_index(s)];
                None
            }
            Effect::Oracle { tuple, yes, no } => match oracle_query(oracle, &tuple) {
                Ok(answer) => {
                    cfg.pc = if answer { yes } else { no };
                    rec.oracle = Some((tuple, answer));
                    None
                }
                Err(_) => Some(finish(Status::Fault, None, cfg.steps, Some(FaultKind::OracleUnsupported))),
            },
            Effect::Halt(out) => Some(finish(Status::Halted, Some(out), cfg.steps, None)),
            Effect::Fault(f) => Some(finish(Status::Fault, None, cfg.steps, Some(f))),
        };
        if let Some(t) = trace.as_deref_mut() {
            t.steps.push(rec);
        }
        if let Some(r) = outcome {
            return Ok(r);
        }
    }
}
