//! Constructive witnesses: the m-th root counterexample pipeline for
//! oracle machines deciding algebraic dependence, and the Cantor-set
//! decomposition of rationals.

mod cantor;
mod counterexample;

pub use cantor::{cantor_decompose, even_zeros_truth, CantorPair, TernaryDigits};
pub use counterexample::{
    build_counterexample, choose_prime_m, dependence_program, max_var_degree, place_root, CounterexampleReport,
    OracleCheck, Verdict,
};

use crate::arith::ArithError;
use crate::machine::MachineError;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum WitnessError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("root enclosure did not converge")]
    EnclosureFailure,
    #[error("no eventually periodic expansion within {0} digits")]
    DigitBudget(usize),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Machine(#[from] MachineError),
}
