//! The BSS machine: programs, the DSL, exact execution and oracles.

pub mod dsl;
pub mod enumerate;
pub mod exec;
pub mod oracle;
pub mod program;

pub use dsl::parse_program;
pub use exec::{
    run, run_concrete, run_field, Configuration, Effect, FaultKind, MachineError, PathEvent, RunResult, Status, Trace,
    TraceStep, ValueOps,
};
pub use oracle::{cantor_membership, oracle_query, Oracle, OracleKind, OracleUnsupported};
pub use program::{Arity, CellRef, ConstSource, Instruction, Param, Program, ProgramError, ShiftDir};

use crate::arith::{AlgebraicNumber, ArithError, FieldRef};

/// Parses a tuple literal such as `(1/2, -3)` or `(K:(0,1), 2)`.
pub fn parse_tuple(text: &str, fields: &[FieldRef]) -> Result<Vec<AlgebraicNumber>, ArithError> {
    let t = text.trim();
    let inner = t
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| ArithError::Parse(format!("tuple must be parenthesized: {t:?}")))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    // split on commas outside nested parentheses
    let mut parts = Vec::new();
    let mut depth = 0;
    let mut start = 0;
    for (i, ch) in inner.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&inner[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&inner[start..]);
    parts.into_iter().map(|p| AlgebraicNumber::parse_with(p, fields)).collect()
}
