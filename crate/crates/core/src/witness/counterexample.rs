use num_traits::{One, Signed};
use serde::Serialize;

use crate::arith::{
    degree_over_q, fmt_rational, int, is_prime, nth_root_field, round_to_multiple, AlgebraicNumber, MultiPoly,
    NumberField, Rational, RationalFunction, Sign,
};
use crate::machine::{oracle_query, run_concrete, Oracle, OracleKind, Program, Status};
use crate::stdlib::stdlib_program;
use crate::symbolic::{epsilon_certificate, extract_f, shadow_trace, OracleMode, SymbolicTrace};

use super::WitnessError;

/// The arity-2 search that halts iff its input pair is algebraically dependent.
pub fn dependence_program() -> Program {
    stdlib_program("dependence", &[]).expect("stdlib entry")
}

/// Largest degree in variable `var` over the numerators and denominators of `functions`.
pub fn max_var_degree(functions: &[RationalFunction], var: usize) -> u32 {
    functions.iter().flat_map(|f| [f.numerator().var_degree(var), f.denominator().var_degree(var)]).max().unwrap_or(0)
}

/// Smallest prime strictly greater than `n`.
pub fn choose_prime_m(n: u32) -> u32 {
    (n + 1..).find(|&m| is_prime(u64::from(m))).expect("primes are unbounded")
}

/// Picks a rational shift `b` so that `x2 = b + x1^(1/m)` lies strictly
/// within `eps` of `center`.
///
/// `b` is `center` minus the midpoint of a tight enclosure of the root,
/// rounded to a multiple of `min(eps/2, 1/2)`; the placement is confirmed
/// by two exact sign tests before it is returned.
pub fn place_root(
    x1: &Rational,
    m: u32,
    center: &Rational,
    eps: &Rational,
) -> Result<(Rational, AlgebraicNumber), WitnessError> {
    if !eps.is_positive() {
        return Err(WitnessError::Precondition("epsilon must be positive".into()));
    }
    if !x1.is_positive() {
        return Err(WitnessError::Precondition(format!("x1 = {} must be positive", fmt_rational(x1))));
    }
    let (field, root) = nth_root_field(x1, m)?;
    if field.is_rational() {
        return Err(WitnessError::Precondition(format!("{} is a perfect {m}-th power", fmt_rational(x1))));
    }
    let step = (eps / int(2)).min(Rational::new(1.into(), 2.into()));
    let enclosure = root.enclosure(&(&step / int(16)));
    let b = round_to_multiple(&(center - enclosure.midpoint()), &step);
    let x2 = root.try_add(&AlgebraicNumber::rational(b.clone()))?;
    let lower = x2.try_sub(&AlgebraicNumber::rational(center - eps))?;
    let upper = AlgebraicNumber::rational(center + eps).try_sub(&x2)?;
    if lower.sign() != Sign::Positive || upper.sign() != Sign::Positive {
        return Err(WitnessError::EnclosureFailure);
    }
    Ok((b, x2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    CounterexampleConfirmed,
    PipelineInapplicable,
}

/// How the report confirmed that the real oracle answers the witness's
/// queries like the generic policy did.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleCheck {
    /// `degree_bound`, `finite_set` or `direct_query`.
    pub method: String,
    pub queries: usize,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CounterexampleReport {
    pub machine: String,
    pub probe: Vec<String>,
    pub functions: Vec<String>,
    pub n: u32,
    pub m: u32,
    pub epsilon: Option<String>,
    pub b: Option<String>,
    pub x1: String,
    pub x2: Option<String>,
    pub x2_degree: Option<usize>,
    pub x1_in_certified_box: Option<bool>,
    pub probe_history_len: usize,
    pub path_equal: bool,
    pub machine_output: Option<Vec<String>>,
    pub ground_truth: u8,
    pub vanishing_polynomial: Option<String>,
    pub oracle_check: Option<OracleCheck>,
    pub verdict: Verdict,
    pub reason: Option<String>,
}

impl CounterexampleReport {
    pub fn confirmed(&self) -> bool {
        self.verdict == Verdict::CounterexampleConfirmed
    }

    pub fn to_text(&self) -> String {
        let opt = |v: &Option<String>| v.clone().unwrap_or_else(|| "-".into());
        let mut out = String::new();
        out.push_str(&format!("machine            {}\n", self.machine));
        out.push_str(&format!("probe              ({})\n", self.probe.join(", ")));
        out.push_str(&format!("F                  {{{}}}\n", self.functions.join(", ")));
        out.push_str(&format!("n                  {}\n", self.n));
        out.push_str(&format!("m                  {}\n", self.m));
        out.push_str(&format!("epsilon            {}\n", opt(&self.epsilon)));
        out.push_str(&format!("b                  {}\n", opt(&self.b)));
        out.push_str(&format!("x1                 {}\n", self.x1));
        out.push_str(&format!("x2                 {}\n", opt(&self.x2)));
        out.push_str(&format!("degree(x2)         {}\n", self.x2_degree.map_or("-".into(), |d| d.to_string())));
        out.push_str(&format!(
            "x1 in box          {}\n",
            self.x1_in_certified_box.map_or("-".into(), |b| b.to_string())
        ));
        out.push_str(&format!("path_equal         {}\n", self.path_equal));
        out.push_str(&format!(
            "machine_output     {}\n",
            self.machine_output.as_ref().map_or("-".into(), |o| format!("({})", o.join(", ")))
        ));
        out.push_str(&format!("ground_truth       {}\n", self.ground_truth));
        out.push_str(&format!("vanishing          {}\n", opt(&self.vanishing_polynomial)));
        if let Some(c) = &self.oracle_check {
            out.push_str(&format!(
                "oracle_check       {} over {} queries: {}\n",
                c.method,
                c.queries,
                if c.passed { "ok" } else { "failed" }
            ));
        }
        out.push_str(&format!(
            "verdict            {}\n",
            match self.verdict {
                Verdict::CounterexampleConfirmed => "counterexample_confirmed",
                Verdict::PipelineInapplicable => "pipeline_inapplicable",
            }
        ));
        if let Some(r) = &self.reason {
            out.push_str(&format!("reason             {r}\n"));
        }
        out
    }
}

/// Checks the witness's nonconstant oracle queries against the real oracle.
fn check_oracle(oracle: &Oracle, trace: &SymbolicTrace, point: &[AlgebraicNumber]) -> OracleCheck {
    let queries: Vec<Vec<AlgebraicNumber>> = trace
        .oracle_log
        .iter()
        .filter(|o| !o.was_constant)
        .map(|o| o.functions.iter().map(|f| f.eval(point)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()
        .unwrap_or_default();
    let count = trace.oracle_log.iter().filter(|o| !o.was_constant).count();
    let evaluated = queries.len() == count;
    let agrees = queries.iter().all(|t| oracle_query(oracle, t) == Ok(oracle.generic_policy));
    let (method, passed) = match (&oracle.kind, oracle.degree_bound()) {
        (OracleKind::FiniteSet(_), _) => ("finite_set", agrees),
        // each query needs a component of degree above anything the oracle holds
        (_, Some(d)) => ("degree_bound", agrees && queries.iter().all(|t| t.iter().any(|v| degree_over_q(v) > d))),
        _ => ("direct_query", agrees),
    };
    OracleCheck { method: method.into(), queries: count, passed: evaluated && passed }
}

/// Searches for a pair on which the oracle machine `machine` answers the
/// algebraic-dependence question wrongly.
///
/// Traces `machine` at `probe` under the generic oracle policy, certifies a
/// box around the probe for the trace's F set, places `x2 = b + x1^(1/m)`
/// in it with `m` a prime above every Y2-degree in F, and reruns the
/// machine on `(x1, x2)` with the real oracle. The pair is algebraically
/// dependent, so a machine that repeats its probe path and output 0 is
/// wrong there.
pub fn build_counterexample(
    machine: &Program,
    oracle: &Oracle,
    x1: &Rational,
    probe: &[AlgebraicNumber],
    budget: u64,
) -> Result<CounterexampleReport, WitnessError> {
    if probe.len() != 2 {
        return Err(WitnessError::Precondition("the probe must be a pair".into()));
    }
    let probe_center = probe[1]
        .as_rational()
        .cloned()
        .ok_or_else(|| WitnessError::Precondition("the probe must be rational".into()))?;
    let trace = shadow_trace(machine, probe, oracle, OracleMode::Generic, budget)?;
    let mut report = CounterexampleReport {
        machine: machine.name().to_string(),
        probe: probe.iter().map(|v| v.to_string()).collect(),
        functions: Vec::new(),
        n: 0,
        m: 0,
        epsilon: None,
        b: None,
        x1: fmt_rational(x1),
        x2: None,
        x2_degree: None,
        x1_in_certified_box: None,
        probe_history_len: trace.history().len(),
        path_equal: false,
        machine_output: None,
        ground_truth: 1,
        vanishing_polynomial: None,
        oracle_check: None,
        verdict: Verdict::PipelineInapplicable,
        reason: None,
    };
    let inapplicable = |mut r: CounterexampleReport, why: String| {
        r.reason = Some(why);
        Ok(r)
    };
    let Some(functions) = extract_f(&trace) else {
        return inapplicable(report, "the probe run did not halt".into());
    };
    report.functions = functions.iter().map(|f| f.to_string()).collect();
    if let Some(b) = trace.branch_log.iter().find(|b| b.sign == Sign::Zero && !b.function.is_constant()) {
        return inapplicable(report, format!("equality branch on the nonconstant function {}", b.function));
    }
    report.n = max_var_degree(&functions, 1);
    report.m = choose_prime_m(report.n);
    let cert = match epsilon_certificate(&functions, probe, 64) {
        Ok(c) => c,
        Err(e) => return inapplicable(report, format!("no certificate at the probe: {e}")),
    };
    report.epsilon = Some(fmt_rational(&cert.epsilon));
    let (b, x2) = place_root(x1, report.m, &probe_center, &cert.epsilon)?;
    report.b = Some(fmt_rational(&b));
    report.x2 = Some(x2.to_string());
    report.x2_degree = Some(degree_over_q(&x2));
    let x1_num = AlgebraicNumber::rational(x1.clone());
    report.x1_in_certified_box = Some({
        let d = x1_num.try_sub(&probe[0])?;
        d.as_rational().is_some_and(|d| d.abs() <= cert.epsilon)
    });

    // (Y2 - b)^m - Y1 vanishes at (x1, x2)
    let q = NumberField::rationals();
    let shifted = MultiPoly::var(&q, 2, 1).sub(&MultiPoly::constant(&AlgebraicNumber::rational(b.clone()), 2));
    let vanishing = shifted.pow(report.m).sub(&MultiPoly::var(&q, 2, 0));
    let pair = [x1_num, x2];
    if !vanishing.eval(&pair)?.is_zero() {
        return Err(WitnessError::Precondition("the vanishing polynomial does not vanish".into()));
    }
    report.vanishing_polynomial = Some(vanishing.to_string());
    report.ground_truth = 1;

    let (result, concrete) = run_concrete(machine, &pair, oracle, budget)?;
    if result.status == Status::Fault {
        return inapplicable(report, format!("the witness run faulted: {}", result.summary()));
    }
    report.path_equal = concrete.history() == trace.history() && result.status == Status::Halted;
    report.machine_output = result.output.as_ref().map(|o| o.iter().map(|v| v.to_string()).collect());
    report.oracle_check = Some(check_oracle(oracle, &trace, &pair));
    let wrong = result.halted() && result.output.as_deref() != Some(&[AlgebraicNumber::rational(Rational::one())][..]);
    if report.path_equal && wrong {
        report.verdict = Verdict::CounterexampleConfirmed;
    } else {
        report.reason = Some(if report.path_equal {
            "the machine answers the witness correctly".into()
        } else {
            "the witness run left the probe path".into()
        });
    }
    Ok(report)
}
