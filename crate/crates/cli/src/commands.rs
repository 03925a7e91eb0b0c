use std::fs;

use bss_core::arith::{fmt_rational, is_prime, parse_rational, FieldRef, NumberField, Rational, Sign};
use bss_core::machine::exec::RunResultJson;
use bss_core::machine::{cantor_membership, parse_program, parse_tuple, run_concrete, Arity, Oracle, Program};
use bss_core::stdlib::{stdlib_by_spec, ENTRIES};
use bss_core::symbolic::{
    boundary_report, certify_trace, explore_paths, extract_f, field_boundary_check, shadow_agreement, shadow_trace,
    OracleMode, OraclePolicy, SymbolicTrace,
};
use bss_core::witness::{build_counterexample, cantor_decompose, CounterexampleReport, WitnessError};
use serde_json::{json, Value};

use super::{Command, Format, Mode, ProgramArgs, StdlibAction};

pub enum Outcome {
    Success,
    Falsified,
}

type Result<T> = std::result::Result<T, String>;

pub fn dispatch(command: Command) -> Result<Outcome> {
    match command {
        Command::Run { program, input, budget, no_trace } => run(&program, &input, budget, no_trace),
        Command::Shadow { program, input, budget, oracle_mode } => shadow(&program, &input, budget, oracle_mode),
        Command::Paths { program, arity, depth, budget, oracle_forks, boundary } => {
            paths(&program, arity, depth, budget, oracle_forks, boundary)
        }
        Command::Certify { program, input, budget, samples, seed, halvings } => {
            certify(&program, &input, budget, samples, seed, halvings)
        }
        Command::Witness { program, input, x1, budget } => witness(&program, &input, &x1, budget),
        Command::Cantor { decompose, member, digits, format } => cantor(decompose, member, digits, format),
        Command::Stdlib { action } => stdlib(action),
    }
}

struct Loaded {
    program: Program,
    fields: Vec<FieldRef>,
    oracle: Oracle,
}

fn load(args: &ProgramArgs) -> Result<Loaded> {
    let program = match (&args.stdlib, &args.program) {
        (Some(spec), _) => stdlib_by_spec(spec).map_err(|e| e.to_string())?,
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            parse_program(&text).map_err(|e| format!("{}: {e}", path.display()))?
        }
        (None, None) => return Err("one of --stdlib or --program is required".into()),
    };
    let mut fields = args
        .fields
        .iter()
        .map(|f| NumberField::parse(f).map_err(|e| format!("--field {f:?}: {e}")))
        .collect::<Result<Vec<_>>>()?;
    fields.extend(program.fields().iter().cloned());
    let oracle = match args.oracle.strip_prefix("finite:") {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
            Oracle::finite_from_text(&text, &fields).map_err(|e| format!("{path}: {e}"))?
        }
        None => Oracle::parse(&args.oracle)?,
    };
    Ok(Loaded { program, fields, oracle })
}

fn tuple(text: &str, fields: &[FieldRef]) -> Result<Vec<bss_core::arith::AlgebraicNumber>> {
    parse_tuple(text, fields).map_err(|e| format!("--input {text:?}: {e}"))
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn failure(command: &str, check: &str, detail: &str) -> Value {
    json!({ "command": command, "check": check, "detail": detail })
}

/// Text mode prints the failure record as one JSON line after the report.
fn report_failure(format: Format, record: &Value) {
    if format == Format::Text {
        println!("failure {record}");
    }
}

fn run(args: &ProgramArgs, input: &str, budget: u64, no_trace: bool) -> Result<Outcome> {
    let l = load(args)?;
    let input = tuple(input, &l.fields)?;
    let (result, trace) = run_concrete(&l.program, &input, &l.oracle, budget).map_err(|e| e.to_string())?;
    match args.format {
        Format::Text => {
            if !no_trace {
                print!("{}", trace.to_text(&l.program));
            }
            println!("{}", result.summary());
        }
        Format::Json => {
            let trace = (!no_trace).then(|| trace.to_json(&l.program));
            print_json(&json!({ "result": RunResultJson::from(&result), "trace": trace }));
        }
    }
    Ok(Outcome::Success)
}

fn shadow(args: &ProgramArgs, input: &str, budget: u64, mode: Mode) -> Result<Outcome> {
    let l = load(args)?;
    let input = tuple(input, &l.fields)?;
    let mode = match mode {
        Mode::Concrete => OracleMode::Concrete,
        Mode::Generic => OracleMode::Generic,
    };
    let trace = shadow_trace(&l.program, &input, &l.oracle, mode, budget).map_err(|e| e.to_string())?;
    let boundary = field_boundary_check(&trace);
    // the generic policy may answer differently from the real oracle, so
    // only concrete-mode traces are compared against a concrete run
    let agreement = match mode {
        OracleMode::Concrete => {
            let (_, concrete) = run_concrete(&l.program, &input, &l.oracle, budget).map_err(|e| e.to_string())?;
            Some(shadow_agreement(&trace, &concrete))
        }
        OracleMode::Generic => None,
    };
    let f_set = extract_f(&trace).map(|fs| fs.iter().map(|f| f.to_string()).collect::<Vec<_>>());
    let mut failures = Vec::new();
    if !boundary.passed() {
        failures.push(failure("shadow", "field_boundary", &boundary.violations.join("; ")));
    }
    if let Some(Err(detail)) = &agreement {
        failures.push(failure("shadow", "shadow_agreement", detail));
    }
    match args.format {
        Format::Text => {
            print!("{}", shadow_text(&trace, &l.program));
            match &f_set {
                Some(fs) => println!("F = {{{}}}", fs.join(", ")),
                None => println!("F undefined: the run did not halt"),
            }
            println!(
                "field boundary: {} cells checked, max degree {}, {}",
                boundary.cells_checked,
                boundary.max_degree,
                if boundary.passed() { "ok" } else { "VIOLATED" }
            );
            match &agreement {
                Some(Ok(())) => println!("concrete agreement: ok"),
                Some(Err(d)) => println!("concrete agreement: FAILED ({d})"),
                None => println!("concrete agreement: skipped under the generic oracle policy"),
            }
            for f in &failures {
                report_failure(Format::Text, f);
            }
        }
        Format::Json => print_json(&json!({
            "trace": trace.to_json(&l.program),
            "f_set": f_set,
            "field_boundary": boundary,
            "agreement": agreement.map(|a| a.is_ok()),
            "failures": failures,
        })),
    }
    Ok(if failures.is_empty() { Outcome::Success } else { Outcome::Falsified })
}

fn shadow_text(trace: &SymbolicTrace, prog: &Program) -> String {
    let json = trace.to_json(prog);
    let mut out = String::new();
    for s in &json.steps {
        let writes: Vec<String> =
            s.writes.iter().map(|w| format!("@{}={} ~ {}", w.cell, w.value, w.function)).collect();
        out.push_str(&format!(
            "{} {} {} writes=[{}] branch={} oracle={}\n",
            s.step,
            s.pc,
            s.instr,
            writes.join(", "),
            s.branch.map_or("-", Sign::symbol),
            s.oracle.map_or("-", |a| if a { "yes" } else { "no" })
        ));
    }
    let o = &json.outcome;
    out.push_str(&format!("outcome: {}", o.status));
    if let (Some(fs), Some(vs)) = (&o.output_functions, &o.output_values) {
        out.push_str(&format!(", output ({}) = ({})", fs.join(", "), vs.join(", ")));
    }
    out.push('\n');
    out
}

fn paths(
    args: &ProgramArgs,
    arity: Option<usize>,
    depth: usize,
    budget: u64,
    oracle_forks: bool,
    boundary: bool,
) -> Result<Outcome> {
    let l = load(args)?;
    let arity = match (l.program.arity(), arity) {
        (Arity::Fixed(n), None) => n,
        (Arity::Fixed(n), Some(a)) if a == n => n,
        (Arity::Fixed(n), Some(a)) => return Err(format!("--arity {a} disagrees with the program's arity {n}")),
        (Arity::Var, Some(a)) => a,
        (Arity::Var, None) => return Err("programs of variable arity need --arity".into()),
    };
    let policy = if oracle_forks { OraclePolicy::Both } else { OraclePolicy::Generic };
    let tree = explore_paths(&l.program, arity, &l.oracle, policy, depth, budget).map_err(|e| e.to_string())?;
    let report = boundary.then(|| boundary_report(&tree));
    let json = tree.to_json();
    let mut outcome = Outcome::Success;
    match args.format {
        Format::Text => {
            println!("{}: {} leaves, {} forks, depth budget {}", json.program, json.leaves.len(), json.forks, depth);
            for (i, leaf) in json.leaves.iter().enumerate() {
                let mut conds: Vec<String> = leaf
                    .constraints
                    .iter()
                    .map(|c| {
                        let rel = match c.sign {
                            Sign::Negative => "<",
                            Sign::Zero => "=",
                            Sign::Positive => ">",
                        };
                        format!("{} {rel} 0", c.function)
                    })
                    .collect();
                conds.extend(leaf.guards.iter().map(|g| format!("{g} != 0")));
                conds.extend(
                    leaf.oracle_assumptions
                        .iter()
                        .map(|a| format!("({}) {} A", a.query.join(", "), if a.answer { "in" } else { "not in" })),
                );
                let outputs = leaf.outputs.as_ref().map_or(String::new(), |o| format!(" ({})", o.join(", ")));
                let cond = if conds.is_empty() { "true".to_string() } else { conds.join(" and ") };
                let mz = if leaf.measure_zero { " [measure zero]" } else { "" };
                println!("leaf {i}: {}{outputs} when {cond}{mz}", leaf.status);
            }
            match &report {
                Some(Ok(polys)) => {
                    let ps: Vec<String> = polys.iter().map(|p| p.to_string()).collect();
                    println!("boundary: {{{}}}", ps.join(", "));
                }
                Some(Err(e)) => {
                    println!("boundary: unavailable ({e})");
                    report_failure(Format::Text, &failure("paths", "boundary_report", &e.to_string()));
                    outcome = Outcome::Falsified;
                }
                None => {}
            }
        }
        Format::Json => {
            let boundary = match &report {
                Some(Ok(polys)) => json!(polys.iter().map(|p| p.to_string()).collect::<Vec<_>>()),
                Some(Err(e)) => {
                    outcome = Outcome::Falsified;
                    json!({ "failure": failure("paths", "boundary_report", &e.to_string()) })
                }
                None => Value::Null,
            };
            print_json(&json!({ "tree": json, "boundary": boundary }));
        }
    }
    Ok(outcome)
}

fn certify(args: &ProgramArgs, input: &str, budget: u64, samples: usize, seed: u64, halvings: u32) -> Result<Outcome> {
    let l = load(args)?;
    let input = tuple(input, &l.fields)?;
    let trace = shadow_trace(&l.program, &input, &l.oracle, OracleMode::Concrete, budget).map_err(|e| e.to_string())?;
    let f_set: Vec<String> = extract_f(&trace).unwrap_or_default().iter().map(|f| f.to_string()).collect();
    let cert = match certify_trace(&trace, halvings) {
        Ok(c) => c,
        Err(e) => {
            let record = failure("certify", "epsilon_certificate", &e.to_string());
            match args.format {
                Format::Text => {
                    println!("F = {{{}}}", f_set.join(", "));
                    println!("no certificate: {e}");
                    report_failure(Format::Text, &record);
                }
                Format::Json => print_json(&json!({ "f_set": f_set, "failure": record })),
            }
            return Ok(Outcome::Falsified);
        }
    };
    let report = bss_core::symbolic::verify_neighborhood(&l.program, &l.oracle, &trace, &cert, samples, seed);
    let record = (!report.all_passed()).then(|| {
        let bad: Vec<String> = report
            .samples
            .iter()
            .filter(|s| !s.passed())
            .map(|s| format!("({}): {}", s.point.join(", "), s.detail.clone().unwrap_or_default()))
            .collect();
        failure("certify", "verify_neighborhood", &bad.join("; "))
    });
    match args.format {
        Format::Text => {
            println!("F = {{{}}}", f_set.join(", "));
            println!("epsilon = {} ({} halvings)", fmt_rational(&cert.epsilon), cert.halvings);
            for (i, iv) in cert.rational_box.iter().enumerate() {
                println!("box Y{} in {iv}", i + 1);
            }
            for e in &cert.enclosures {
                println!("{}: numerator in {}, denominator in {}", e.function, e.numerator, e.denominator);
            }
            println!("samples {}/{} pass", report.passed, report.samples.len());
            if let Some(r) = &record {
                report_failure(Format::Text, r);
            }
        }
        Format::Json => print_json(&json!({
            "f_set": f_set,
            "certificate": cert.to_json(),
            "neighborhood": report,
            "failure": record,
        })),
    }
    Ok(if record.is_none() { Outcome::Success } else { Outcome::Falsified })
}

/// Report invariants: m prime above n, x2 of degree m, and a confirmed
/// verdict backed by an equal path, a wrong output and a passing oracle check.
fn witness_violations(r: &CounterexampleReport) -> Vec<String> {
    let mut v = Vec::new();
    if r.x2.is_some() {
        if !is_prime(u64::from(r.m)) || r.m <= r.n {
            v.push(format!("m = {} is not a prime above n = {}", r.m, r.n));
        }
        if r.x2_degree != Some(r.m as usize) {
            v.push(format!("degree(x2) = {:?}, expected {}", r.x2_degree, r.m));
        }
    }
    if r.confirmed() {
        if !r.path_equal {
            v.push("confirmed without an equal path".into());
        }
        if r.machine_output.as_deref() == Some(&[r.ground_truth.to_string()][..]) {
            v.push("confirmed although the output matches the ground truth".into());
        }
        if !r.oracle_check.as_ref().is_some_and(|c| c.passed) {
            v.push("confirmed without a passing oracle check".into());
        }
    }
    v
}

fn witness(args: &ProgramArgs, input: &str, x1: &str, budget: u64) -> Result<Outcome> {
    let l = load(args)?;
    let probe = tuple(input, &l.fields)?;
    let x1: Rational = parse_rational(x1).map_err(|e| format!("--x1: {e}"))?;
    let report = match build_counterexample(&l.program, &l.oracle, &x1, &probe, budget) {
        Ok(r) => r,
        Err(e @ (WitnessError::Precondition(_) | WitnessError::Machine(_))) => return Err(e.to_string()),
        Err(e) => {
            let record = failure("witness", "build_counterexample", &e.to_string());
            match args.format {
                Format::Text => {
                    println!("no witness: {e}");
                    report_failure(Format::Text, &record);
                }
                Format::Json => print_json(&json!({ "failure": record })),
            }
            return Ok(Outcome::Falsified);
        }
    };
    let violations = witness_violations(&report);
    let record = (!violations.is_empty()).then(|| failure("witness", "report_invariants", &violations.join("; ")));
    match args.format {
        Format::Text => {
            print!("{}", report.to_text());
            if let Some(r) = &record {
                report_failure(Format::Text, r);
            }
        }
        Format::Json => print_json(&json!({ "report": report, "failure": record })),
    }
    Ok(if record.is_none() { Outcome::Success } else { Outcome::Falsified })
}

fn cantor(decompose: Option<String>, member: Option<String>, digits: usize, format: Format) -> Result<Outcome> {
    if let Some(text) = member {
        let x = parse_rational(&text).map_err(|e| format!("--member: {e}"))?;
        let inside = cantor_membership(&x);
        match format {
            Format::Text => {
                println!("{} {} the Cantor set", fmt_rational(&x), if inside { "is in" } else { "is not in" })
            }
            Format::Json => print_json(&json!({ "x": fmt_rational(&x), "member": inside })),
        }
        return Ok(Outcome::Success);
    }
    let text = decompose.expect("clap requires one of --decompose and --member");
    let x = parse_rational(&text).map_err(|e| format!("--decompose: {e}"))?;
    let pair = match cantor_decompose(&x, digits) {
        Ok(p) => p,
        Err(WitnessError::Precondition(m)) => return Err(m),
        Err(e) => {
            let record = failure("cantor", "cantor_decompose", &e.to_string());
            match format {
                Format::Text => {
                    println!("no decomposition: {e}");
                    report_failure(Format::Text, &record);
                }
                Format::Json => print_json(&json!({ "failure": record })),
            }
            return Ok(Outcome::Falsified);
        }
    };
    let sum_ok = &pair.c1 + &pair.c2 / Rational::from_integer(2.into()) == x;
    let members_ok = cantor_membership(&pair.c1) && cantor_membership(&pair.c2);
    let record = (!(sum_ok && members_ok)).then(|| {
        failure("cantor", "decomposition", &format!("sum exact: {sum_ok}, parts in the Cantor set: {members_ok}"))
    });
    match format {
        Format::Text => {
            println!("{pair}");
            println!(
                "check: c1 + c2/2 = x {}, c1 and c2 in the Cantor set {}",
                if sum_ok { "exact" } else { "FAILED" },
                if members_ok { "yes" } else { "NO" }
            );
            if let Some(r) = &record {
                report_failure(Format::Text, r);
            }
        }
        Format::Json => print_json(&json!({
            "decomposition": pair,
            "sum_exact": sum_ok,
            "parts_in_cantor_set": members_ok,
            "failure": record,
        })),
    }
    Ok(if record.is_none() { Outcome::Success } else { Outcome::Falsified })
}

fn stdlib(action: StdlibAction) -> Result<Outcome> {
    match action {
        StdlibAction::List { format: Format::Text } => {
            for e in ENTRIES {
                let params: Vec<String> = e
                    .params
                    .iter()
                    .map(|(n, p, q)| format!("{n}={}", fmt_rational(&bss_core::arith::rat(*p, *q))))
                    .collect();
                let params = if params.is_empty() { String::new() } else { format!(" [{}]", params.join(", ")) };
                println!("{:<22} arity {:<2} {}{params}", e.name, e.arity, e.summary);
            }
        }
        StdlibAction::List { format: Format::Json } => {
            let list: Vec<Value> = ENTRIES
                .iter()
                .map(|e| {
                    let params: Vec<Value> = e
                        .params
                        .iter()
                        .map(|(n, p, q)| json!({ "name": n, "default": fmt_rational(&bss_core::arith::rat(*p, *q)) }))
                        .collect();
                    json!({ "name": e.name, "arity": e.arity, "summary": e.summary, "params": params })
                })
                .collect();
            print_json(&Value::Array(list));
        }
        StdlibAction::Show { spec } => {
            let p = stdlib_by_spec(&spec).map_err(|e| e.to_string())?;
            print!("{p}");
        }
    }
    Ok(Outcome::Success)
}
