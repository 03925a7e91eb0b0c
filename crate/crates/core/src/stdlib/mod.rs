//! Named BSS programs, generated as DSL source.
//!
//! Each entry is also checked in under `crates/core/stdlib/<name>.bss`
//! (with default parameters); a test keeps the files in sync with the
//! generators.

mod asm;
mod search;
mod simple;

use crate::arith::{parse_rational, rat, Rational};
use crate::machine::{parse_program, Program};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum StdlibError {
    #[error("unknown stdlib program {0:?}")]
    UnknownName(String),
    #[error("{name} takes {expected} parameters, got {got}")]
    ParamCount { name: String, expected: usize, got: usize },
    #[error("bad stdlib parameter: {0}")]
    BadParam(String),
}

pub struct StdlibEntry {
    pub name: &'static str,
    pub arity: &'static str,
    pub summary: &'static str,
    /// Rational parameters with their defaults.
    pub params: &'static [(&'static str, i64, i64)],
}

pub const ENTRIES: &[StdlibEntry] = &[
    StdlibEntry { name: "sgn", arity: "1", summary: "sign of the input as -1, 0 or 1", params: &[] },
    StdlibEntry {
        name: "interval_member",
        arity: "1",
        summary: "1 if lo <= x <= hi, else 0",
        params: &[("lo", 1, 2), ("hi", 1, 1)],
    },
    StdlibEntry { name: "reciprocal", arity: "1", summary: "1/(x-1), diverging at x = 1", params: &[] },
    StdlibEntry {
        name: "even_zeros",
        arity: "1",
        summary: "1 iff x in (0,1) has a binary expansion starting with an even number of zeros",
        params: &[],
    },
    StdlibEntry {
        name: "cantor_cosemidecider",
        arity: "1",
        summary: "halts (output 1) iff x is outside the Cantor set",
        params: &[],
    },
    StdlibEntry { name: "q_enumerator", arity: "1", summary: "n-th rational of the fixed order", params: &[] },
    StdlibEntry {
        name: "qx_enumerator",
        arity: "1",
        summary: "coefficients of the n-th nonzero polynomial in Q[X]",
        params: &[],
    },
    StdlibEntry {
        name: "algebraic_semidecider",
        arity: "1",
        summary: "halts iff some nonzero p in Q[X] has p(x) = 0; outputs the index of p",
        params: &[],
    },
    StdlibEntry {
        name: "dependence",
        arity: "2",
        summary: "halts iff some nonzero q in Q[Y1,Y2] has q(x1,x2) = 0; outputs the index of q",
        params: &[],
    },
    StdlibEntry { name: "m_toy", arity: "2", summary: "1 iff the oracle accepts (x2)", params: &[] },
    StdlibEntry { name: "m_const", arity: "2", summary: "always 0", params: &[] },
    StdlibEntry { name: "m_eq", arity: "2", summary: "1 iff x1 = x2", params: &[] },
];

pub fn names() -> impl Iterator<Item = &'static str> {
    ENTRIES.iter().map(|e| e.name)
}

pub fn entry(name: &str) -> Result<&'static StdlibEntry, StdlibError> {
    ENTRIES.iter().find(|e| e.name == name).ok_or_else(|| StdlibError::UnknownName(name.to_string()))
}

/// DSL source of an entry. `params` may be empty to take the defaults.
pub fn stdlib_source(name: &str, params: &[Rational]) -> Result<String, StdlibError> {
    let e = entry(name)?;
    let values: Vec<Rational> = if params.is_empty() {
        e.params.iter().map(|&(_, n, d)| rat(n, d)).collect()
    } else if params.len() == e.params.len() {
        params.to_vec()
    } else {
        return Err(StdlibError::ParamCount { name: name.into(), expected: e.params.len(), got: params.len() });
    };
    Ok(match name {
        "sgn" => simple::sgn(),
        "interval_member" => simple::interval_member(&values[0], &values[1]),
        "reciprocal" => simple::reciprocal(),
        "even_zeros" => simple::even_zeros(),
        "cantor_cosemidecider" => simple::cantor_cosemidecider(),
        "q_enumerator" => search::q_enumerator(),
        "qx_enumerator" => search::qx_enumerator(),
        "algebraic_semidecider" => search::algebraic_semidecider(),
        "dependence" => search::dependence(),
        "m_toy" => simple::m_toy(),
        "m_const" => simple::m_const(),
        "m_eq" => simple::m_eq(),
        _ => unreachable!("entry table and generators agree"),
    })
}

pub fn stdlib_program(name: &str, params: &[Rational]) -> Result<Program, StdlibError> {
    let src = stdlib_source(name, params)?;
    Ok(parse_program(&src).expect("generated stdlib source parses"))
}

/// Parses `name` or `name(p1, p2, …)` with rational parameters.
pub fn stdlib_by_spec(spec: &str) -> Result<Program, StdlibError> {
    let spec = spec.trim();
    match spec.split_once('(') {
        Some((name, rest)) => {
            let inner = rest.strip_suffix(')').ok_or_else(|| StdlibError::BadParam(spec.to_string()))?;
            let params = inner
                .split(',')
                .map(|p| parse_rational(p).map_err(|e| StdlibError::BadParam(e.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            stdlib_program(name.trim(), &params)
        }
        None => stdlib_program(spec, &[]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    #[test]
    fn every_entry_generates_a_valid_program() {
        for name in names() {
            let p = stdlib_program(name, &[]).unwrap();
            assert_eq!(p.name(), name);
            assert_eq!(parse_program(&p.to_string()).unwrap(), p, "{name} round trip");
        }
    }

    #[test]
    fn parameterized_specs() {
        let p = stdlib_by_spec("interval_member(-1, 2)").unwrap();
        assert_eq!(p.params()[0].value.as_rational(), Some(&int(-1)));
        assert!(matches!(stdlib_by_spec("nope"), Err(StdlibError::UnknownName(_))));
        assert!(matches!(stdlib_by_spec("interval_member(1)"), Err(StdlibError::ParamCount { .. })));
    }
}
