//! Exact arithmetic: rationals, univariate and multivariate polynomials,
//! real number fields and rigorous interval enclosures.

mod field;
mod interval;
mod minpoly;
mod multipoly;
mod ratfunc;
mod rational;
mod unipoly;

pub use field::{field_arith, nth_root_field, sign_at, AlgebraicNumber, ArithOp, FieldRef, NumberField};
pub use interval::RatInterval;
pub use minpoly::{degree_over_q, minimal_polynomial};
pub use multipoly::{interval_eval, Monomial, MultiPoly};
pub use ratfunc::{rf_eval, RationalFunction};
pub use rational::{
    exact_rational_root, floor, fmt_rational, half, int, is_prime, parse_rational, pow, rat, round_to_multiple, to_f64,
    two_pow, Rational, Sign,
};
pub use unipoly::{sturm_count, sturm_isolate, UniPoly};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different number fields")]
    FieldMismatch,
    #[error("invalid number field: {0}")]
    InvalidField(String),
    #[error("unsupported root degree {0}: only prime degrees are handled for non-perfect powers")]
    UnsupportedDegree(u32),
    #[error("{0}")]
    Domain(String),
    #[error("denominator vanishes at the evaluation point")]
    Pole,
    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
}
