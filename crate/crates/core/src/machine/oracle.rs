//! Oracle sets and exact membership queries.

use std::collections::HashSet;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::arith::{degree_over_q, rat, AlgebraicNumber, ArithError, FieldRef, Rational};

#[derive(Clone, Debug, PartialEq)]
pub enum OracleKind {
    /// Tuples whose coordinates are all rational.
    Rationals,
    /// Tuples of real algebraic numbers. Every value a run can hold is
    /// algebraic, so this answers true throughout.
    Algebraic,
    /// 1-tuples of algebraic degree exactly `d`.
    DegreeEq(usize),
    /// 1-tuples of algebraic degree at most `d`.
    DegreeLeq(usize),
    /// 1-tuples in the middle-thirds Cantor set (rational values only).
    Cantor,
    FiniteSet(Vec<Vec<AlgebraicNumber>>),
    Empty,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Oracle {
    pub kind: OracleKind,
    /// Answer assumed for nonconstant symbolic queries.
    pub generic_policy: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("oracle {oracle} cannot answer the query: {reason}")]
pub struct OracleUnsupported {
    pub oracle: String,
    pub reason: String,
}

impl Oracle {
    pub fn new(kind: OracleKind) -> Self {
        Oracle { kind, generic_policy: false }
    }

    pub fn empty() -> Self {
        Oracle::new(OracleKind::Empty)
    }

    pub fn rationals() -> Self {
        Oracle::new(OracleKind::Rationals)
    }

    /// Parses `rationals`, `algebraic`, `deg=d`, `degle=d`, `cantor`, `empty`.
    /// Finite sets are built with [`Oracle::finite_from_text`].
    pub fn parse(spec: &str) -> Result<Oracle, String> {
        let s = spec.trim().to_ascii_lowercase();
        let kind = match s.as_str() {
            "rationals" => OracleKind::Rationals,
            "algebraic" => OracleKind::Algebraic,
            "cantor" => OracleKind::Cantor,
            "empty" => OracleKind::Empty,
            _ => {
                if let Some(d) = s.strip_prefix("deg=") {
                    OracleKind::DegreeEq(d.parse().map_err(|_| format!("bad degree in {spec:?}"))?)
                } else if let Some(d) = s.strip_prefix("degle=") {
                    OracleKind::DegreeLeq(d.parse().map_err(|_| format!("bad degree in {spec:?}"))?)
                } else {
                    return Err(format!("unknown oracle {spec:?}"));
                }
            }
        };
        Ok(Oracle::new(kind))
    }

    /// One tuple literal per nonblank line, `#` comments allowed.
    pub fn finite_from_text(text: &str, fields: &[FieldRef]) -> Result<Oracle, ArithError> {
        let mut tuples = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap().trim();
            if !line.is_empty() {
                tuples.push(super::parse_tuple(line, fields)?);
            }
        }
        Ok(Oracle::new(OracleKind::FiniteSet(tuples)))
    }

    /// Largest algebraic degree the oracle can contain, for degree-bounded oracles.
    pub fn degree_bound(&self) -> Option<usize> {
        match self.kind {
            OracleKind::Rationals => Some(1),
            OracleKind::DegreeEq(d) | OracleKind::DegreeLeq(d) => Some(d),
            _ => None,
        }
    }
}

impl fmt::Display for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            OracleKind::Rationals => f.write_str("rationals"),
            OracleKind::Algebraic => f.write_str("algebraic"),
            OracleKind::DegreeEq(d) => write!(f, "deg={d}"),
            OracleKind::DegreeLeq(d) => write!(f, "degle={d}"),
            OracleKind::Cantor => f.write_str("cantor"),
            OracleKind::FiniteSet(t) => write!(f, "finite({} tuples)", t.len()),
            OracleKind::Empty => f.write_str("empty"),
        }
    }
}

pub fn oracle_query(oracle: &Oracle, t: &[AlgebraicNumber]) -> Result<bool, OracleUnsupported> {
    let unsupported = |reason: &str| OracleUnsupported { oracle: oracle.to_string(), reason: reason.to_string() };
    match &oracle.kind {
        OracleKind::Rationals => Ok(t.iter().all(AlgebraicNumber::is_rational)),
        OracleKind::Algebraic => Ok(true),
        OracleKind::DegreeEq(d) | OracleKind::DegreeLeq(d) => {
            let [x] = t else {
                return Err(unsupported("degree oracles take 1-tuples only"));
            };
            let deg = degree_over_q(x);
            Ok(match oracle.kind {
                OracleKind::DegreeEq(_) => deg == *d,
                _ => deg <= *d,
            })
        }
        OracleKind::Cantor => {
            let [x] = t else {
                return Err(unsupported("the Cantor oracle takes 1-tuples only"));
            };
            let r = x.as_rational().ok_or_else(|| unsupported(&format!("{x} is not rational")))?;
            Ok(cantor_membership(r))
        }
        OracleKind::FiniteSet(set) => {
            Ok(set.iter().any(|s| s.len() == t.len() && s.iter().zip(t).all(|(a, b)| a == b)))
        }
        OracleKind::Empty => Ok(false),
    }
}

/// Whether `x` lies in the middle-thirds Cantor set.
///
/// Follows the ternary expansion one digit at a time, preferring the digit
/// 0 or 2 at the boundary points 1/3 and 2/3 where two expansions exist. A
/// rational's digit map `x ↦ 3x mod 1` is eventually periodic, so a repeated
/// state means the remaining digits avoid 1 forever.
pub fn cantor_membership(x: &Rational) -> bool {
    if x.is_negative() || *x > Rational::one() {
        return false;
    }
    let third = rat(1, 3);
    let two_thirds = rat(2, 3);
    let three = Rational::from_integer(3.into());
    let two = Rational::from_integer(2.into());
    let mut seen = HashSet::new();
    let mut cur = x.clone();
    loop {
        if !seen.insert(cur.clone()) {
            return true;
        }
        if cur <= third {
            cur = &cur * &three;
        } else if cur >= two_thirds {
            cur = &cur * &three - &two;
        } else {
            return false;
        }
        if cur.is_zero() {
            return true;
        }
    }
}

/// Human-readable text for a query tuple.
pub fn fmt_tuple(t: &[AlgebraicNumber]) -> String {
    let parts: Vec<String> = t.iter().map(|v| v.to_string()).collect();
    format!("({})", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, NumberField, UniPoly};

    #[test]
    fn cantor_examples() {
        assert!(cantor_membership(&rat(1, 4)));
        assert!(!cantor_membership(&rat(1, 2)));
        assert!(cantor_membership(&int(1)));
        assert!(cantor_membership(&int(0)));
        assert!(cantor_membership(&rat(1, 3)));
        assert!(cantor_membership(&rat(2, 3)));
        assert!(cantor_membership(&rat(3, 4)));
        assert!(!cantor_membership(&rat(4, 9)));
        assert!(!cantor_membership(&rat(-1, 9)));
        assert!(!cantor_membership(&rat(10, 9)));
    }

    #[test]
    fn query_examples() {
        let k = NumberField::new("s", UniPoly::from_i64(&[-2, 0, 1]), int(1), int(2)).unwrap();
        let s2 = AlgebraicNumber::generator(&k);
        let q = AlgebraicNumber::rational(rat(3, 4));
        assert_eq!(oracle_query(&Oracle::rationals(), std::slice::from_ref(&q)), Ok(true));
        assert_eq!(oracle_query(&Oracle::rationals(), std::slice::from_ref(&s2)), Ok(false));
        assert_eq!(oracle_query(&Oracle::new(OracleKind::DegreeEq(2)), std::slice::from_ref(&s2)), Ok(true));
        assert_eq!(oracle_query(&Oracle::new(OracleKind::DegreeLeq(1)), std::slice::from_ref(&s2)), Ok(false));
        assert!(oracle_query(&Oracle::new(OracleKind::DegreeEq(2)), &[q.clone(), q.clone()]).is_err());
        assert!(oracle_query(&Oracle::new(OracleKind::Cantor), std::slice::from_ref(&s2)).is_err());
        assert_eq!(oracle_query(&Oracle::new(OracleKind::Cantor), std::slice::from_ref(&q)), Ok(true));
        assert_eq!(oracle_query(&Oracle::new(OracleKind::Algebraic), &[s2]), Ok(true));
        assert_eq!(oracle_query(&Oracle::empty(), &[q]), Ok(false));
    }

    #[test]
    fn parse_specs() {
        assert_eq!(Oracle::parse("deg=3").unwrap().kind, OracleKind::DegreeEq(3));
        assert_eq!(Oracle::parse("degle=2").unwrap().kind, OracleKind::DegreeLeq(2));
        assert_eq!(Oracle::parse("Rationals").unwrap().kind, OracleKind::Rationals);
        assert!(Oracle::parse("bogus").is_err());
        let o = Oracle::finite_from_text("(1, 2)\n# note\n(3)\n", &[]).unwrap();
        let OracleKind::FiniteSet(t) = o.kind else { panic!() };
        assert_eq!(t.len(), 2);
    }
}
