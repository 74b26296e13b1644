//! Command-line front end for the orbit-class engine.

pub mod report;

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::{Parser, Subcommand};

use orbitcell::apps::{change_of_variables, evaluate_degree, orbit_class, target};
use orbitcell::error::FamilyError;
use orbitcell::exact::Rational;
use orbitcell::expr::parse_taut_expr;
use orbitcell::families::{family, family_catalog, FAMILY_NAMES};
use orbitcell::m0n::{M0nSpace, TautEvaluator};
use orbitcell::solver::solve_exact;

use report::{build_report, catalog_relations, family_block, plain, render_text};

pub const EXIT_OK: i32 = 0;
pub const EXIT_COMPUTATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "orbitcell", version, about = "Equivariant orbit class of a general cubic surface")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Full pipeline: families, solve, applications.
    Report {
        #[arg(long)]
        json: bool,
        /// Include wall-clock timing in the JSON meta block (output is then not byte-stable).
        #[arg(long)]
        timing: bool,
    },
    /// Solve the eight-row system for the orbit-class coefficients.
    Solve,
    /// Chern vector and degree of one test family.
    Family {
        name: String,
        #[arg(long)]
        json: bool,
    },
    /// Degree of the orbit class on a target base.
    Evaluate {
        target: String,
        /// Exit with status 1 unless the degree equals this value.
        #[arg(long, value_parser = parse_rational)]
        expect: Option<Rational>,
    },
    /// Integrate a tautological expression over M0,n.
    M0n {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        integrate: String,
    },
    /// The orbit class in the Chern classes of the standard representation.
    ChangeOfVariables,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    s.trim().parse::<Rational>().map_err(|e| format!("`{s}` is not an integer or p/q rational: {e}"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CommandOutput {
    fn ok(stdout: String) -> Self {
        CommandOutput { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn fail(code: i32, stdout: String, stderr: String) -> Self {
        CommandOutput { code, stdout, stderr }
    }
}

enum Failure {
    Usage(String),
    Computation(String),
}

impl From<FamilyError> for Failure {
    fn from(e: FamilyError) -> Self {
        match e {
            FamilyError::Unknown(_) => Failure::Usage(e.to_string()),
            other => Failure::Computation(other.to_string()),
        }
    }
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run_command<I, T>(argv: I) -> CommandOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                CommandOutput::fail(EXIT_USAGE, String::new(), text)
            } else {
                CommandOutput::ok(text)
            };
        }
    };
    match dispatch(cli.command) {
        Ok(out) => CommandOutput::ok(out),
        Err((stdout, Failure::Usage(msg))) => CommandOutput::fail(EXIT_USAGE, stdout, format!("error: {msg}\n")),
        Err((stdout, Failure::Computation(msg))) => {
            CommandOutput::fail(EXIT_COMPUTATION, stdout, format!("error: {msg}\n"))
        }
    }
}

type Outcome = Result<String, (String, Failure)>;

fn no_output<E: Into<Failure>>(e: E) -> (String, Failure) {
    (String::new(), e.into())
}

fn dispatch(cmd: Command) -> Outcome {
    match cmd {
        Command::Report { json, timing } => {
            let r = build_report(timing).map_err(no_output)?;
            if json {
                Ok(serde_json::to_string_pretty(&r).expect("report serializes") + "\n")
            } else {
                Ok(render_text(&r))
            }
        }
        Command::Solve => solve(),
        Command::Family { name, json } => family_command(&name, json),
        Command::Evaluate { target, expect } => evaluate(&target, expect),
        Command::M0n { n, integrate } => m0n(n, &integrate),
        Command::ChangeOfVariables => {
            let cv = change_of_variables().map_err(no_output)?;
            Ok(format!(
                "normalized: {}\ncontent:    {}\nfull:       {}\n",
                cv.normalized.to_string_descending(),
                cv.content,
                cv.full.to_string_descending()
            ))
        }
    }
}

fn solve() -> Outcome {
    let catalog = family_catalog().map_err(no_output)?;
    let relations = catalog_relations(&catalog).map_err(no_output)?;
    let s = solve_exact(&relations).map_err(|e| no_output(FamilyError::from(e)))?;
    let mut out = String::new();
    writeln!(out, "solution {}", s.solution).unwrap();
    writeln!(out, "rank {}", s.rank).unwrap();
    writeln!(out, "residuals").unwrap();
    for (f, r) in catalog.iter().zip(&s.residuals) {
        writeln!(out, "  {:<11} {r}", f.name).unwrap();
    }
    Ok(out)
}

fn family_command(name: &str, json: bool) -> Outcome {
    let f = family(name).map_err(|e| {
        no_output(Failure::Usage(format!("{e}; known families: {}", FAMILY_NAMES.join(", "))))
    })?;
    let r = orbitcell::families::relation(&f).map_err(no_output)?;
    let block = family_block(&f, &r, None).map_err(no_output)?;
    if json {
        return Ok(serde_json::to_string_pretty(&block).expect("block serializes") + "\n");
    }
    let mut out = String::new();
    writeln!(out, "family  {}", f.name).unwrap();
    writeln!(out, "base    {} ({})", f.ring.name(), f.description).unwrap();
    writeln!(out, "class   {}", block.vclass).unwrap();
    writeln!(out, "vector  {}", r.vector).unwrap();
    writeln!(out, "rhs     {}  ({})", r.rhs, f.provenance).unwrap();
    Ok(out)
}

fn evaluate(name: &str, expect: Option<Rational>) -> Outcome {
    let t = target(name).map_err(no_output)?;
    let coeffs = orbit_class().map_err(no_output)?;
    let d = evaluate_degree(&t, &coeffs).map_err(no_output)?;
    let out = format!("{}: {d}\nexpected {}  ({})\n", t.name, t.expected_degree, t.provenance);
    match expect {
        Some(e) if e != d => Err((out, Failure::Computation(format!("expected {e}, got {d}")))),
        _ => Ok(out),
    }
}

fn m0n(n: usize, src: &str) -> Outcome {
    let space = M0nSpace::new(n).map_err(|e| no_output(Failure::Usage(e.to_string())))?;
    let e = parse_taut_expr(&space, src).map_err(|e| {
        let caret = format!("{src}\n{}^", " ".repeat(e.position));
        no_output(Failure::Usage(format!("{e}\n{caret}")))
    })?;
    let v = TautEvaluator::new().integrate(&space, &e).map_err(|e| no_output(Failure::Computation(e.to_string())))?;
    Ok(format!("{}\n", plain(&orbitcell::exact::rational_to_pq(&v))))
}
