//! `bss`: run, trace, certify and attack BSS programs from the command line.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "bss", version, about = "Exact-arithmetic BSS machines with symbolic analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a program exactly and print its trace.
    Run {
        #[command(flatten)]
        program: ProgramArgs,
        #[arg(long)]
        input: String,
        #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,
        /// Print only the final result line.
        #[arg(long)]
        no_trace: bool,
    },
    /// Shadow trace: every cell as a rational function of the inputs.
    Shadow {
        #[command(flatten)]
        program: ProgramArgs,
        #[arg(long)]
        input: String,
        #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,
        #[arg(long, value_enum, default_value_t = Mode::Concrete)]
        oracle_mode: Mode,
    },
    /// Explore every path on symbolic inputs.
    Paths {
        #[command(flatten)]
        program: ProgramArgs,
        /// Number of inputs, required for programs of variable arity.
        #[arg(long)]
        arity: Option<usize>,
        /// Maximum number of forks along a path.
        #[arg(long, default_value_t = 12)]
        depth: usize,
        /// Step cap per path.
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,
        /// Fork on input-dependent oracle queries instead of taking the generic answer.
        #[arg(long)]
        oracle_forks: bool,
        /// Also print the boundary polynomials.
        #[arg(long)]
        boundary: bool,
    },
    /// Certify a sign-invariant box around an input and sample it.
    Certify {
        #[command(flatten)]
        program: ProgramArgs,
        #[arg(long)]
        input: String,
        #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        halvings: u32,
    },
    /// Build an algebraically dependent input on which a claimed
    /// dependence decider repeats a generic run.
    Witness {
        #[command(flatten)]
        program: ProgramArgs,
        /// Probe pair the machine is traced on.
        #[arg(long)]
        input: String,
        /// Rational whose m-th root goes into the second coordinate.
        #[arg(long, default_value = "2")]
        x1: String,
        #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,
    },
    /// Cantor-set membership and the decomposition x = c1 + c2/2.
    Cantor {
        #[arg(long, conflicts_with = "member", required_unless_present = "member")]
        decompose: Option<String>,
        #[arg(long)]
        member: Option<String>,
        /// Ternary digits to try before giving up on periodicity.
        #[arg(long, default_value_t = 4096)]
        digits: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// List or print the built-in programs.
    Stdlib {
        #[command(subcommand)]
        action: StdlibAction,
    },
}

#[derive(Subcommand)]
enum StdlibAction {
    List {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print DSL source, e.g. `interval_member(-1, 2)`.
    Show { spec: String },
}

#[derive(Args)]
struct ProgramArgs {
    /// Built-in program, optionally with parameters: `interval_member(0, 1)`.
    #[arg(long, conflicts_with = "program", required_unless_present = "program")]
    stdlib: Option<String>,
    /// Path to a DSL source file.
    #[arg(long)]
    program: Option<PathBuf>,
    /// Register a number field `name=minpoly;lo;hi` for input literals.
    #[arg(long = "field")]
    fields: Vec<String>,
    /// rationals | algebraic | deg=d | degle=d | cantor | finite:<path> | empty
    #[arg(long, default_value = "empty")]
    oracle: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Concrete,
    Generic,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::dispatch(cli.command) {
        Ok(commands::Outcome::Success) => ExitCode::SUCCESS,
        Ok(commands::Outcome::Falsified) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
