//! Program representation and the canonical DSL printer.

use std::collections::HashMap;
use std::fmt;

use crate::arith::{AlgebraicNumber, ArithOp, FieldRef};

/// A tape cell operand. `c<i>` is relative to the head, `@<i>` absolute.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CellRef {
    Rel(usize),
    Abs(i64),
}

impl CellRef {
    pub fn resolve(self, head: i64) -> i64 {
        match self {
            CellRef::Rel(i) => head + i as i64,
            CellRef::Abs(i) => i,
        }
    }
}

impl fmt::Display for CellRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CellRef::Rel(i) => write!(f, "c{i}"),
            CellRef::Abs(i) => write!(f, "@{i}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ConstSource {
    Literal(AlgebraicNumber),
    Param(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftDir {
    Left,
    Right,
}

/// One machine instruction. Jump targets are instruction indices.
#[derive(Clone, Debug, PartialEq)]
pub enum Instruction {
    Const { dst: CellRef, src: ConstSource },
    Copy { dst: CellRef, src: CellRef },
    Arith { op: ArithOp, dst: CellRef, a: CellRef, b: CellRef },
    Branch { src: CellRef, neg: usize, zero: usize, pos: usize },
    Jmp { target: usize },
    Shift(ShiftDir),
    Oracle { lo: CellRef, hi: CellRef, yes: usize, no: usize },
    Output { lo: CellRef, hi: CellRef },
}

impl Instruction {
    pub fn targets(&self) -> Vec<usize> {
        match self {
            Instruction::Branch { neg, zero, pos, .. } => vec![*neg, *zero, *pos],
            Instruction::Jmp { target } => vec![*target],
            Instruction::Oracle { yes, no, .. } => vec![*yes, *no],
            _ => Vec::new(),
        }
    }

    pub fn mnemonic(&self) -> &'static str {
        match self {
            Instruction::Const { .. } => "CONST",
            Instruction::Copy { .. } => "COPY",
            Instruction::Arith { op, .. } => op.mnemonic(),
            Instruction::Branch { .. } => "BRANCH",
            Instruction::Jmp { .. } => "JMP",
            Instruction::Shift(ShiftDir::Left) => "SHIFTL",
            Instruction::Shift(ShiftDir::Right) => "SHIFTR",
            Instruction::Oracle { .. } => "ORACLE",
            Instruction::Output { .. } => "OUTPUT",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arity {
    Fixed(usize),
    Var,
}

impl fmt::Display for Arity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arity::Fixed(n) => write!(f, "{n}"),
            Arity::Var => f.write_str("VAR"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Param {
    pub name: String,
    pub value: AlgebraicNumber,
}

#[derive(Clone, Debug, thiserror::Error, PartialEq, Eq)]
pub enum ProgramError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unresolved label {label:?}")]
    UnresolvedLabel { line: usize, label: String },
    #[error("line {line}: parameter reference {reference:?} out of range")]
    BadParam { line: usize, reference: String },
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("instruction {index} jumps to {target}, which is outside the program")]
    BadTarget { index: usize, target: usize },
    #[error("instruction {index} is a jump target but has no label")]
    UnlabeledTarget { index: usize },
    #[error("instruction {index}: cell range {lo}..{hi} is reversed")]
    ReversedRange { index: usize, lo: String, hi: String },
    #[error("{0}")]
    Invalid(String),
}

/// A BSS program: header data plus a labeled instruction sequence. Execution
/// starts at instruction 0.
#[derive(Clone, Debug, PartialEq)]
pub struct Program {
    name: String,
    arity: Arity,
    params: Vec<Param>,
    fields: Vec<FieldRef>,
    zero: Option<(i64, i64)>,
    instructions: Vec<Instruction>,
    labels: Vec<Option<String>>,
}

impl Program {
    pub fn new(
        name: impl Into<String>,
        arity: Arity,
        params: Vec<Param>,
        fields: Vec<FieldRef>,
        zero: Option<(i64, i64)>,
        instructions: Vec<Instruction>,
        labels: Vec<Option<String>>,
    ) -> Result<Program, ProgramError> {
        if labels.len() != instructions.len() {
            return Err(ProgramError::Invalid("one label slot per instruction required".into()));
        }
        let mut seen = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if let Some(l) = l {
                if seen.insert(l.clone(), i).is_some() {
                    return Err(ProgramError::DuplicateLabel(l.clone()));
                }
            }
        }
        if let Some((lo, hi)) = zero {
            if lo > hi {
                return Err(ProgramError::Invalid(format!("ZERO window {lo}..{hi} is reversed")));
            }
        }
        for (index, ins) in instructions.iter().enumerate() {
            for target in ins.targets() {
                if target >= instructions.len() {
                    return Err(ProgramError::BadTarget { index, target });
                }
                if labels[target].is_none() {
                    return Err(ProgramError::UnlabeledTarget { index: target });
                }
            }
            match ins {
                Instruction::Const { src: ConstSource::Param(p), .. } if *p >= params.len() => {
                    return Err(ProgramError::BadParam { line: index + 1, reference: format!("${p}") });
                }
                Instruction::Oracle { lo, hi, .. } | Instruction::Output { lo, hi } => {
                    let reversed = match (lo, hi) {
                        (CellRef::Rel(a), CellRef::Rel(b)) => a > b,
                        (CellRef::Abs(a), CellRef::Abs(b)) => a > b,
                        _ => false,
                    };
                    if reversed {
                        return Err(ProgramError::ReversedRange { index, lo: lo.to_string(), hi: hi.to_string() });
                    }
                }
                _ => {}
            }
        }
        Ok(Program { name: name.into(), arity, params, fields, zero, instructions, labels })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> Arity {
        self.arity
    }

    pub fn params(&self) -> &[Param] {
        &self.params
    }

    pub fn fields(&self) -> &[FieldRef] {
        &self.fields
    }

    pub fn zero_window(&self) -> Option<(i64, i64)> {
        self.zero
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    pub fn label(&self, index: usize) -> Option<&str> {
        self.labels.get(index).and_then(|l| l.as_deref())
    }

    pub fn labeled_count(&self) -> usize {
        self.labels.iter().filter(|l| l.is_some()).count()
    }

    /// Every literal and parameter the program mentions.
    pub fn constants(&self) -> impl Iterator<Item = &AlgebraicNumber> {
        self.params.iter().map(|p| &p.value).chain(self.instructions.iter().filter_map(|i| match i {
            Instruction::Const { src: ConstSource::Literal(v), .. } => Some(v),
            _ => None,
        }))
    }

    pub fn is_zero_initialized(&self, cell: i64) -> bool {
        self.zero.is_some_and(|(lo, hi)| lo <= cell && cell <= hi)
    }

    fn target_name(&self, index: usize) -> &str {
        self.labels[index].as_deref().expect("validated: targets are labeled")
    }

    /// DSL text of one instruction, without its label.
    pub fn instruction_text(&self, index: usize) -> String {
        match &self.instructions[index] {
            Instruction::Const { dst, src } => {
                let s = match src {
                    ConstSource::Literal(v) => v.to_string(),
                    ConstSource::Param(p) => format!("${}", self.params[*p].name),
                };
                format!("CONST {dst} {s}")
            }
            Instruction::Copy { dst, src } => format!("COPY {dst} {src}"),
            Instruction::Arith { op, dst, a, b } => format!("{} {dst} {a} {b}", op.mnemonic()),
            Instruction::Branch { src, neg, zero, pos } => format!(
                "BRANCH {src} {} {} {}",
                self.target_name(*neg),
                self.target_name(*zero),
                self.target_name(*pos)
            ),
            Instruction::Jmp { target } => format!("JMP {}", self.target_name(*target)),
            Instruction::Shift(ShiftDir::Left) => "SHIFTL".into(),
            Instruction::Shift(ShiftDir::Right) => "SHIFTR".into(),
            Instruction::Oracle { lo, hi, yes, no } => {
                format!("ORACLE {lo}..{hi} {} {}", self.target_name(*yes), self.target_name(*no))
            }
            Instruction::Output { lo, hi } => format!("OUTPUT {lo}..{hi}"),
        }
    }
}

impl fmt::Display for Program {
    /// Canonical DSL source; `parse_program` reads it back to an equal program.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PROGRAM {}", self.name)?;
        writeln!(f, "ARITY {}", self.arity)?;
        for field in &self.fields {
            writeln!(f, "FIELD {} = {}", field.name(), field.spec_string())?;
        }
        for p in &self.params {
            writeln!(f, "PARAM {} = {}", p.name, p.value)?;
        }
        if let Some((lo, hi)) = self.zero {
            writeln!(f, "ZERO {lo}..{hi}")?;
        }
        let width = self.labels.iter().flatten().map(|l| (l.len() + 2).max(4)).max().unwrap_or(0);
        for i in 0..self.instructions.len() {
            let prefix = match &self.labels[i] {
                Some(l) => format!("{l}:"),
                None => String::new(),
            };
            if width == 0 {
                writeln!(f, "{}", self.instruction_text(i))?;
            } else {
                writeln!(f, "{prefix:<width$}{}", self.instruction_text(i))?;
            }
        }
        Ok(())
    }
}
