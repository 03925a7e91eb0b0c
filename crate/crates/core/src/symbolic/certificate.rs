//! Certified sign-constant neighborhoods and their sampled verification.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{half, int, interval_eval, AlgebraicNumber, RatInterval, Rational, RationalFunction, Sign};
use crate::machine::{run_concrete, Oracle, Program, Status};

use super::shadow::{extract_f, SymbolicTrace};

#[derive(Clone, Debug, PartialEq)]
pub struct FunctionEnclosure {
    pub function: RationalFunction,
    pub numerator: RatInterval,
    pub denominator: RatInterval,
}

/// `center ± epsilon` (∞-norm) on which every function keeps its sign.
#[derive(Clone, Debug, PartialEq)]
pub struct EpsilonCertificate {
    pub center: Vec<AlgebraicNumber>,
    pub epsilon: Rational,
    pub halvings: u32,
    /// Rational box containing `center ± epsilon`, over which the
    /// enclosures were computed.
    pub rational_box: Vec<RatInterval>,
    pub enclosures: Vec<FunctionEnclosure>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CertificateError {
    #[error("{0} vanishes at the center")]
    ZeroAtCenter(String),
    #[error("{0} is undefined at the center")]
    PoleAtCenter(String),
    #[error("no certified epsilon after {0} halvings")]
    Failure(u32),
    #[error("the trace did not halt")]
    NotHalted,
    #[error("the trace takes an equality branch on the nonconstant function {0}")]
    EqualityBranch(String),
}

impl EpsilonCertificate {
    pub fn functions(&self) -> impl Iterator<Item = &RationalFunction> {
        self.enclosures.iter().map(|e| &e.function)
    }

    pub fn to_json(&self) -> CertificateJson {
        CertificateJson {
            center: self.center.iter().map(|c| c.to_string()).collect(),
            epsilon: crate::arith::fmt_rational(&self.epsilon),
            halvings: self.halvings,
            enclosures: self
                .enclosures
                .iter()
                .map(|e| EnclosureJson {
                    function: e.function.to_string(),
                    numerator: e.numerator.clone(),
                    denominator: e.denominator.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EnclosureJson {
    pub function: String,
    pub numerator: RatInterval,
    pub denominator: RatInterval,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateJson {
    pub center: Vec<String>,
    pub epsilon: String,
    pub halvings: u32,
    pub enclosures: Vec<EnclosureJson>,
}

fn coordinate_box(c: &AlgebraicNumber, eps: &Rational) -> RatInterval {
    let e = c.enclosure(&(eps / int(16)));
    RatInterval::new(e.lo() - eps, e.hi() + eps)
}

/// Starting from ε = 1 and halving, the first ε for which interval
/// evaluation over `center ± ε` keeps every numerator and denominator in
/// `functions` away from 0.
pub fn epsilon_certificate(
    functions: &[RationalFunction],
    center: &[AlgebraicNumber],
    max_halvings: u32,
) -> Result<EpsilonCertificate, CertificateError> {
    for f in functions {
        match f.eval(center) {
            Ok(v) if v.is_zero() => return Err(CertificateError::ZeroAtCenter(f.to_string())),
            Ok(_) => {}
            Err(_) => return Err(CertificateError::PoleAtCenter(f.to_string())),
        }
    }
    let mut eps = int(1);
    for halvings in 0..=max_halvings {
        let bx: Vec<RatInterval> = center.iter().map(|c| coordinate_box(c, &eps)).collect();
        let enclosures: Option<Vec<FunctionEnclosure>> = functions
            .iter()
            .map(|f| {
                let numerator = interval_eval(f.numerator(), &bx);
                let denominator = interval_eval(f.denominator(), &bx);
                (numerator.excludes_zero() && denominator.excludes_zero()).then(|| FunctionEnclosure {
                    function: f.clone(),
                    numerator,
                    denominator,
                })
            })
            .collect();
        if let Some(enclosures) = enclosures {
            return Ok(EpsilonCertificate {
                center: center.to_vec(),
                epsilon: eps,
                halvings,
                rational_box: bx,
                enclosures,
            });
        }
        eps *= half();
    }
    Err(CertificateError::Failure(max_halvings))
}

/// Certificate for a halted trace at its own input, over the trace's F set.
/// Refused when the run took an equality branch on a nonconstant function.
pub fn certify_trace(trace: &SymbolicTrace, max_halvings: u32) -> Result<EpsilonCertificate, CertificateError> {
    let functions = extract_f(trace).ok_or(CertificateError::NotHalted)?;
    if let Some(b) = trace.branch_log.iter().find(|b| b.sign == Sign::Zero && !b.function.is_constant()) {
        return Err(CertificateError::EqualityBranch(b.function.to_string()));
    }
    epsilon_certificate(&functions, &trace.input, max_halvings)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleCheck {
    pub point: Vec<String>,
    pub same_path: bool,
    pub output_matches: bool,
    pub signs_match: bool,
    pub detail: Option<String>,
}

impl SampleCheck {
    pub fn passed(&self) -> bool {
        self.same_path && self.output_matches && self.signs_match
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NeighborhoodReport {
    pub samples: Vec<SampleCheck>,
    pub passed: usize,
    pub failed: usize,
}

impl NeighborhoodReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

/// Grid resolution of the sampled neighborhood points: each coordinate is
/// `center + ε·k/GRID` with integer `|k| ≤ GRID`.
pub const GRID: i64 = 1024;

/// Runs `prog` at random grid points of the certified box and checks each
/// run against the trace: same branch and oracle history, output equal to
/// the trace's output functions at the point, and every certified function
/// keeping its sign at the center.
pub fn verify_neighborhood(
    prog: &Program,
    oracle: &Oracle,
    trace: &SymbolicTrace,
    cert: &EpsilonCertificate,
    samples: usize,
    seed: u64,
) -> NeighborhoodReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let history = trace.history();
    let outputs = trace.output_functions().unwrap_or(&[]);
    let center_signs: Vec<Sign> =
        cert.functions().map(|f| f.eval(&cert.center).map(|v| v.sign()).unwrap_or(Sign::Zero)).collect();
    let budget = trace.step_count() + 1;
    let mut report = NeighborhoodReport { samples: Vec::new(), passed: 0, failed: 0 };
    for _ in 0..samples {
        let point: Vec<AlgebraicNumber> = cert
            .center
            .iter()
            .map(|c| {
                let k = rng.gen_range(-GRID..=GRID);
                let offset = AlgebraicNumber::rational(&cert.epsilon * Rational::new(k.into(), GRID.into()));
                c.try_add(&offset).expect("rational offset")
            })
            .collect();
        let mut check = SampleCheck {
            point: point.iter().map(|v| v.to_string()).collect(),
            same_path: false,
            output_matches: false,
            signs_match: true,
            detail: None,
        };
        for (f, s) in cert.functions().zip(&center_signs) {
            if f.eval(&point).map(|v| v.sign()).ok() != Some(*s) {
                check.signs_match = false;
                check.detail = Some(format!("{f} changes sign"));
            }
        }
        match run_concrete(prog, &point, oracle, budget) {
            Ok((result, concrete)) => {
                check.same_path = concrete.history() == history && result.status == Status::Halted;
                if !check.same_path {
                    check.detail.get_or_insert_with(|| format!("path differs ({})", result.summary()));
                }
                let expected: Result<Vec<AlgebraicNumber>, _> = outputs.iter().map(|f| f.eval(&point)).collect();
                check.output_matches = match (&result.output, expected) {
                    (Some(got), Ok(want)) => *got == want,
                    _ => false,
                };
                if !check.output_matches {
                    check.detail.get_or_insert_with(|| "output differs from the trace's output functions".into());
                }
            }
            Err(e) => check.detail = Some(e.to_string()),
        }
        if check.passed() {
            report.passed += 1;
        } else {
            report.failed += 1;
        }
        report.samples.push(check);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, NumberField};

    fn y() -> RationalFunction {
        RationalFunction::var(&NumberField::rationals(), 1, 0)
    }

    fn q(r: Rational) -> AlgebraicNumber {
        AlgebraicNumber::rational(r)
    }

    #[test]
    fn epsilon_examples() {
        let c = epsilon_certificate(&[y()], &[q(int(5))], 20).unwrap();
        assert_eq!(c.epsilon, int(1));
        assert_eq!(c.enclosures[0].numerator, RatInterval::new(int(4), int(6)));
        let one = RationalFunction::constant(&q(int(1)), 1);
        let c = epsilon_certificate(&[y().sub(&one)], &[q(int(2))], 20).unwrap();
        assert_eq!(c.epsilon, rat(1, 2));
        assert_eq!(c.enclosures[0].numerator, RatInterval::new(rat(1, 2), rat(3, 2)));
        assert_eq!(epsilon_certificate(&[], &[q(int(0))], 0).unwrap().epsilon, int(1));
    }

    #[test]
    fn refuses_zero_at_center_and_reports_failure() {
        assert!(matches!(epsilon_certificate(&[y()], &[q(int(0))], 10), Err(CertificateError::ZeroAtCenter(_))));
        let tiny = y().sub(&RationalFunction::constant(&q(rat(1, 1 << 20)), 1));
        assert_eq!(
            epsilon_certificate(std::slice::from_ref(&tiny), &[q(int(0))], 5),
            Err(CertificateError::Failure(5))
        );
        assert!(epsilon_certificate(&[tiny], &[q(int(0))], 30).is_ok());
    }
}
