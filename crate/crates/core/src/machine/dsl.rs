//! Parser for the line-oriented program DSL.
//!
//! ```text
//! # comment
//! PROGRAM sgn
//! ARITY 1
//! PARAM half = 1/2
//! FIELD K = -2 + 0*X + 1*X^2; 1; 2
//! ZERO 0..10
//!     BRANCH c0 n z p
//! n:  CONST c0 -1
//!     OUTPUT c0..c0
//! ```
//!
//! Beyond the core instruction set the parser accepts `@<i>` absolute cell
//! operands, `FIELD` declarations for coordinate literals such as
//! `K:(0,1)`, and `BRANCHCMP a b scratch Lneg Lzero Lpos`, which expands to
//! `SUB scratch a b` followed by `BRANCH scratch Lneg Lzero Lpos`.

use std::collections::HashMap;

use crate::arith::{AlgebraicNumber, ArithOp, FieldRef, NumberField};

use super::program::{Arity, CellRef, ConstSource, Instruction, Param, Program, ProgramError, ShiftDir};

enum Pending {
    Ready(Instruction),
    Branch { src: CellRef, targets: [String; 3] },
    Jmp(String),
    Oracle { lo: CellRef, hi: CellRef, targets: [String; 2] },
}

pub fn parse_program(text: &str) -> Result<Program, ProgramError> {
    let mut name: Option<String> = None;
    let mut arity: Option<Arity> = None;
    let mut params: Vec<Param> = Vec::new();
    let mut fields: Vec<FieldRef> = Vec::new();
    let mut zero = None;
    let mut body: Vec<(usize, Option<String>, Pending)> = Vec::new();
    let mut pending_label: Option<String> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |msg: String| ProgramError::Syntax { line, msg };
        let content = raw.split('#').next().unwrap().trim();
        if content.is_empty() {
            continue;
        }
        let mut rest = content;
        if let Some((head, tail)) = content.split_once(':') {
            let head = head.trim();
            if is_label(head) {
                if pending_label.is_some() {
                    return Err(err(format!("two labels on one instruction ({head:?})")));
                }
                pending_label = Some(head.to_string());
                rest = tail.trim();
                if rest.is_empty() {
                    continue;
                }
            }
        }
        let mut toks = rest.split_whitespace();
        let op = toks.next().unwrap().to_ascii_uppercase();
        let args: Vec<&str> = toks.collect();
        let arg_text = rest[rest.find(char::is_whitespace).unwrap_or(rest.len())..].trim();

        let header = matches!(op.as_str(), "PROGRAM" | "ARITY" | "PARAM" | "FIELD" | "ZERO");
        if header {
            if !body.is_empty() || pending_label.is_some() {
                return Err(err(format!("{op} must come before the first instruction")));
            }
            match op.as_str() {
                "PROGRAM" => {
                    if args.len() != 1 {
                        return Err(err("PROGRAM takes one name".into()));
                    }
                    name = Some(args[0].to_string());
                }
                "ARITY" => {
                    arity = Some(match args.as_slice() {
                        [a] if a.eq_ignore_ascii_case("VAR") => Arity::Var,
                        [a] => Arity::Fixed(a.parse().map_err(|_| err(format!("bad arity {a:?}")))?),
                        _ => return Err(err("ARITY takes one value".into())),
                    });
                }
                "PARAM" => {
                    let (pname, value) =
                        arg_text.split_once('=').ok_or_else(|| err("PARAM needs `name = value`".into()))?;
                    let pname = pname.trim();
                    if !is_label(pname) {
                        return Err(err(format!("bad parameter name {pname:?}")));
                    }
                    let value = AlgebraicNumber::parse_with(value, &fields).map_err(|e| err(e.to_string()))?;
                    params.push(Param { name: pname.to_string(), value });
                }
                "FIELD" => {
                    let field = NumberField::parse(arg_text).map_err(|e| err(e.to_string()))?;
                    if field.is_rational() {
                        return Err(err("FIELD must declare a proper extension of ℚ".into()));
                    }
                    fields.push(field);
                }
                "ZERO" => {
                    let (lo, hi) = arg_text.split_once("..").ok_or_else(|| err("ZERO needs `lo..hi`".into()))?;
                    let lo: i64 = lo.trim().parse().map_err(|_| err(format!("bad ZERO bound {lo:?}")))?;
                    let hi: i64 = hi.trim().parse().map_err(|_| err(format!("bad ZERO bound {hi:?}")))?;
                    if lo > hi {
                        return Err(err(format!("ZERO window {lo}..{hi} is reversed")));
                    }
                    zero = Some((lo, hi));
                }
                _ => unreachable!(),
            }
            continue;
        }

        let want = |n: usize| -> Result<(), ProgramError> {
            if args.len() == n {
                Ok(())
            } else {
                Err(err(format!("{op} takes {n} operands, got {}", args.len())))
            }
        };
        let cell = |s: &str| parse_cell(s).ok_or_else(|| err(format!("bad cell operand {s:?}")));
        let label = pending_label.take();
        let mut push = |ins: Pending, label: Option<String>| body.push((line, label, ins));
        match op.as_str() {
            "CONST" => {
                want(2)?;
                let dst = cell(args[0])?;
                let src = if let Some(p) = args[1].strip_prefix('$') {
                    let index = match p.parse::<usize>() {
                        Ok(i) => Some(i).filter(|&i| i < params.len()),
                        Err(_) => params.iter().position(|q| q.name == p),
                    };
                    let index = index.ok_or_else(|| ProgramError::BadParam { line, reference: args[1].to_string() })?;
                    ConstSource::Param(index)
                } else {
                    ConstSource::Literal(AlgebraicNumber::parse_with(args[1], &fields).map_err(|e| err(e.to_string()))?)
                };
                push(Pending::Ready(Instruction::Const { dst, src }), label);
            }
            "COPY" => {
                want(2)?;
                push(Pending::Ready(Instruction::Copy { dst: cell(args[0])?, src: cell(args[1])? }), label);
            }
            "ADD" | "SUB" | "MUL" | "DIV" => {
                want(3)?;
                let op = match op.as_str() {
                    "ADD" => ArithOp::Add,
                    "SUB" => ArithOp::Sub,
                    "MUL" => ArithOp::Mul,
                    _ => ArithOp::Div,
                };
                let ins = Instruction::Arith { op, dst: cell(args[0])?, a: cell(args[1])?, b: cell(args[2])? };
                push(Pending::Ready(ins), label);
            }
            "BRANCH" => {
                want(4)?;
                let targets = [args[1].to_string(), args[2].to_string(), args[3].to_string()];
                push(Pending::Branch { src: cell(args[0])?, targets }, label);
            }
            "BRANCHCMP" => {
                want(6)?;
                let scratch = cell(args[2])?;
                let sub = Instruction::Arith { op: ArithOp::Sub, dst: scratch, a: cell(args[0])?, b: cell(args[1])? };
                push(Pending::Ready(sub), label);
                let targets = [args[3].to_string(), args[4].to_string(), args[5].to_string()];
                push(Pending::Branch { src: scratch, targets }, None);
            }
            "JMP" => {
                want(1)?;
                push(Pending::Jmp(args[0].to_string()), label);
            }
            "SHIFTL" | "SHIFTR" => {
                want(0)?;
                let dir = if op == "SHIFTL" { ShiftDir::Left } else { ShiftDir::Right };
                push(Pending::Ready(Instruction::Shift(dir)), label);
            }
            "ORACLE" => {
                want(3)?;
                let (lo, hi) = parse_range(args[0]).ok_or_else(|| err(format!("bad cell range {:?}", args[0])))?;
                push(Pending::Oracle { lo, hi, targets: [args[1].to_string(), args[2].to_string()] }, label);
            }
            "OUTPUT" => {
                want(1)?;
                let (lo, hi) = parse_range(args[0]).ok_or_else(|| err(format!("bad cell range {:?}", args[0])))?;
                push(Pending::Ready(Instruction::Output { lo, hi }), label);
            }
            other => return Err(err(format!("unknown instruction {other:?}"))),
        }
    }
    if let Some(l) = pending_label {
        return Err(ProgramError::Syntax {
            line: text.lines().count(),
            msg: format!("label {l:?} has no instruction"),
        });
    }

    let name = name.ok_or(ProgramError::Syntax { line: 1, msg: "missing PROGRAM header".into() })?;
    let arity = arity.ok_or(ProgramError::Syntax { line: 1, msg: "missing ARITY header".into() })?;
    let mut index: HashMap<&str, usize> = HashMap::new();
    for (i, (_, l, _)) in body.iter().enumerate() {
        if let Some(l) = l {
            if index.insert(l.as_str(), i).is_some() {
                return Err(ProgramError::DuplicateLabel(l.clone()));
            }
        }
    }
    let resolve = |line: usize, l: &str| -> Result<usize, ProgramError> {
        index.get(l).copied().ok_or_else(|| ProgramError::UnresolvedLabel { line, label: l.to_string() })
    };
    let mut instructions = Vec::with_capacity(body.len());
    for (line, _, p) in &body {
        instructions.push(match p {
            Pending::Ready(i) => i.clone(),
            Pending::Branch { src, targets } => Instruction::Branch {
                src: *src,
                neg: resolve(*line, &targets[0])?,
                zero: resolve(*line, &targets[1])?,
                pos: resolve(*line, &targets[2])?,
            },
            Pending::Jmp(t) => Instruction::Jmp { target: resolve(*line, t)? },
            Pending::Oracle { lo, hi, targets } => Instruction::Oracle {
                lo: *lo,
                hi: *hi,
                yes: resolve(*line, &targets[0])?,
                no: resolve(*line, &targets[1])?,
            },
        });
    }
    let labels = body.into_iter().map(|(_, l, _)| l).collect();
    Program::new(name, arity, params, fields, zero, instructions, labels)
}

fn is_label(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn parse_cell(s: &str) -> Option<CellRef> {
    if let Some(i) = s.strip_prefix('c') {
        return i.parse().ok().map(CellRef::Rel);
    }
    if let Some(i) = s.strip_prefix('@') {
        return i.parse().ok().map(CellRef::Abs);
    }
    None
}

fn parse_range(s: &str) -> Option<(CellRef, CellRef)> {
    let (lo, hi) = s.split_once("..")?;
    Some((parse_cell(lo)?, parse_cell(hi)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SGN: &str = "PROGRAM sgn\nARITY 1\n    BRANCH c0 n z p\nn:  CONST c0 -1\n    OUTPUT c0..c0\nz:  CONST c0 0\n    OUTPUT c0..c0\np:  CONST c0 1\n    OUTPUT c0..c0\n";

    #[test]
    fn sgn_round_trip() {
        let p = parse_program(SGN).unwrap();
        assert_eq!(p.labeled_count(), 3);
        assert_eq!(p.len(), 7);
        let printed = p.to_string();
        assert_eq!(parse_program(&printed).unwrap(), p);
        assert_eq!(printed, SGN);
    }

    #[test]
    fn unresolved_label() {
        let text = "PROGRAM bad\nARITY 1\nJMP L9\n";
        assert_eq!(parse_program(text).unwrap_err(), ProgramError::UnresolvedLabel { line: 3, label: "L9".into() });
    }

    #[test]
    fn syntax_errors_carry_lines() {
        let text = "PROGRAM bad\nARITY 1\nCONST c0 1\nFROB c1\n";
        assert!(matches!(parse_program(text), Err(ProgramError::Syntax { line: 4, .. })));
        let text = "PROGRAM bad\nARITY 1\nCONST c0 $7\n";
        assert!(matches!(parse_program(text), Err(ProgramError::BadParam { line: 3, .. })));
        let text = "PROGRAM bad\nARITY 1\nOUTPUT c3..c1\n";
        assert!(matches!(parse_program(text), Err(ProgramError::ReversedRange { .. })));
    }

    #[test]
    fn params_fields_and_sugar() {
        let text = "PROGRAM demo\nARITY VAR\nFIELD K = X^2 - 2; 1; 2\nPARAM a = K:(1,1)\nPARAM b = 3/4\nZERO -2..5\n\
                    top: CONST c1 $a\nCONST c2 $1\nBRANCHCMP c1 c2 c3 top top done\ndone: OUTPUT @0..c0\n";
        let p = parse_program(text).unwrap();
        assert_eq!(p.params().len(), 2);
        assert_eq!(p.len(), 5);
        assert_eq!(p.zero_window(), Some((-2, 5)));
        assert_eq!(parse_program(&p.to_string()).unwrap(), p);
    }
}
