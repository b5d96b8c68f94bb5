//! The `henkin` command-line tool.
//!
//! Exit codes: 0 true/found/success, 1 false/none, 2 usage or parse error,
//! 3 cross-check mismatch, 4 search budget exhausted.

use std::ffi::OsString;
use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::eval::{DomainSize, EvalError, Evaluator, Valuation, DEFAULT_BUDGET};
use crate::fixtures;
use crate::oracle::{Oracle, OracleError};
use crate::reducer::{compile_with, plan_rows, Equation, Mutation, Presentation};
use crate::syntax::Formula;
use crate::text::{parse_equation, parse_presentation, parse_valid_formula, print_formula};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    Negative = 1,
    Usage = 2,
    Mismatch = 3,
    Budget = 4,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "henkin",
    version,
    about = "Finite-model checking for Henkin-quantified sentences and word-problem reductions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a sentence on the domain {0..m-1}
    Eval {
        #[command(flatten)]
        source: FormulaSource,
        #[arg(long, value_name = "M")]
        size: u32,
        /// Use the exhaustive reference engine
        #[arg(long, conflicts_with = "show_witness")]
        naive: bool,
        /// Print the choice tables when the sentence is true
        #[arg(long)]
        show_witness: bool,
        #[arg(long, default_value_t = DEFAULT_BUDGET, value_name = "N")]
        budget: u64,
    },
    /// Find the smallest domain size on which a sentence is true
    Sat {
        #[command(flatten)]
        source: FormulaSource,
        #[arg(long, value_name = "M")]
        max_size: u32,
        #[arg(long, default_value_t = DEFAULT_BUDGET, value_name = "N")]
        budget: u64,
    },
    /// Compile a word-problem instance into a Henkin sentence
    Compile {
        #[command(flatten)]
        instance: Instance,
    },
    /// Search for functions that satisfy the presentation and separate the query
    Oracle {
        #[command(flatten)]
        instance: Instance,
        #[arg(long, value_name = "M")]
        size: u32,
        #[arg(long, default_value_t = DEFAULT_BUDGET, value_name = "N")]
        budget: u64,
    },
    /// Compare the compiled sentence with the oracle at every size up to M
    Crosscheck {
        #[command(flatten)]
        instance: Instance,
        #[arg(long, value_name = "M")]
        max_size: u32,
        #[arg(long, default_value_t = DEFAULT_BUDGET, value_name = "N")]
        budget: u64,
        /// Break the compiler on purpose (drops the final disequality)
        #[arg(long, hide = true)]
        corrupt_compiler: bool,
    },
    /// Print one of the built-in sentences or presentations
    Fixture { name: FixtureName },
}

#[derive(Args, Debug)]
struct FormulaSource {
    /// Formula file, or `-` for standard input
    #[arg(
        value_name = "FILE",
        required_unless_present = "expr",
        conflicts_with = "expr"
    )]
    file: Option<PathBuf>,
    /// Formula text given inline
    #[arg(long, value_name = "TEXT")]
    expr: Option<String>,
}

#[derive(Args, Debug)]
struct Instance {
    /// Presentation file (one `word = word` per line), or `-` for standard input
    #[arg(long, value_name = "FILE")]
    presentation: PathBuf,
    /// Query equation, e.g. "ab = ba"
    #[arg(long, value_name = "EQUATION")]
    query: String,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum FixtureName {
    CeitinH12,
    CeitinE10,
    CeitinPresentation,
    Ehrenfeucht,
    Infinity,
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

type Outcome = Result<ExitStatus, (ExitStatus, String)>;

fn usage(msg: impl Into<String>) -> (ExitStatus, String) {
    (ExitStatus::Usage, msg.into())
}

fn io_fail(e: std::io::Error) -> (ExitStatus, String) {
    if e.kind() == std::io::ErrorKind::BrokenPipe {
        // The reader went away (`| head`); there is nobody left to tell.
        return (ExitStatus::Success, String::new());
    }
    usage(format!("i/o error: {e}"))
}

/// Runs the tool on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{e}");
                ExitStatus::Usage.code()
            } else {
                let _ = write!(out, "{e}");
                ExitStatus::Success.code()
            };
            return code;
        }
    };
    let mut io = Io { stdin, out, err };
    match dispatch(cli.command, &mut io) {
        Ok(status) => status.code(),
        Err((status, msg)) => {
            if !msg.is_empty() {
                let _ = writeln!(io.err, "henkin: {msg}");
            }
            status.code()
        }
    }
}

fn dispatch(command: Command, io: &mut Io<'_>) -> Outcome {
    match command {
        Command::Eval {
            source,
            size,
            naive,
            show_witness,
            budget,
        } => cmd_eval(io, &source, size, naive, show_witness, budget),
        Command::Sat {
            source,
            max_size,
            budget,
        } => cmd_sat(io, &source, max_size, budget),
        Command::Compile { instance } => cmd_compile(io, &instance),
        Command::Oracle {
            instance,
            size,
            budget,
        } => cmd_oracle(io, &instance, size, budget),
        Command::Crosscheck {
            instance,
            max_size,
            budget,
            corrupt_compiler,
        } => {
            let mutation = if corrupt_compiler {
                Mutation::DropSeparation
            } else {
                Mutation::None
            };
            cmd_crosscheck(io, &instance, max_size, budget, mutation)
        }
        Command::Fixture { name } => cmd_fixture(io, name),
    }
}

fn read_source(io: &mut Io<'_>, path: &PathBuf) -> Result<String, (ExitStatus, String)> {
    if path.as_os_str() == "-" {
        let mut buf = String::new();
        io.stdin.read_to_string(&mut buf).map_err(io_fail)?;
        Ok(buf)
    } else {
        fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
    }
}

fn load_sentence(io: &mut Io<'_>, source: &FormulaSource) -> Result<Formula, (ExitStatus, String)> {
    let (text, origin) = match (&source.expr, &source.file) {
        (Some(expr), _) => (expr.clone(), "--expr".to_string()),
        (None, Some(path)) => (read_source(io, path)?, path.display().to_string()),
        (None, None) => return Err(usage("no formula given")),
    };
    let f = parse_valid_formula(&text).map_err(|e| usage(format!("{origin}:{e}")))?;
    let free = f.free_variables();
    if !free.is_empty() {
        let names: Vec<String> = free.iter().map(|v| v.to_string()).collect();
        return Err(usage(format!(
            "{origin}: not a sentence; free variables: {}",
            names.join(", ")
        )));
    }
    Ok(f)
}

fn load_instance(
    io: &mut Io<'_>,
    instance: &Instance,
) -> Result<(Presentation, Equation), (ExitStatus, String)> {
    let text = read_source(io, &instance.presentation)?;
    let e = parse_presentation(&text)
        .map_err(|err| usage(format!("{}:{err}", instance.presentation.display())))?;
    let q = parse_equation(&instance.query).map_err(|err| usage(format!("--query:{err}")))?;
    Ok((e, q))
}

fn domain(m: u32, flag: &str) -> Result<DomainSize, (ExitStatus, String)> {
    DomainSize::new(m).map_err(|_| usage(format!("{flag} must be at least 1")))
}

fn eval_failure(e: EvalError) -> (ExitStatus, String) {
    match e {
        EvalError::BudgetExceeded { .. } => (ExitStatus::Budget, e.to_string()),
        other => usage(other.to_string()),
    }
}

fn oracle_failure(e: OracleError) -> (ExitStatus, String) {
    match e {
        OracleError::BudgetExceeded { .. } => (ExitStatus::Budget, e.to_string()),
        other => usage(other.to_string()),
    }
}

fn verdict(b: bool) -> ExitStatus {
    if b {
        ExitStatus::Success
    } else {
        ExitStatus::Negative
    }
}

fn cmd_eval(
    io: &mut Io<'_>,
    source: &FormulaSource,
    size: u32,
    naive: bool,
    show_witness: bool,
    budget: u64,
) -> Outcome {
    let f = load_sentence(io, source)?;
    let size = domain(size, "--size")?;
    let evaluator = Evaluator::with_budget(budget);
    let env = Valuation::new();
    let (value, witness) = if naive {
        (
            evaluator
                .evaluate_naive(&f, size, &env)
                .map_err(eval_failure)?,
            None,
        )
    } else if show_witness {
        let w = evaluator
            .evaluate_with_witness(&f, size, &env)
            .map_err(eval_failure)?;
        (w.is_some(), w)
    } else {
        (
            evaluator.evaluate(&f, size, &env).map_err(eval_failure)?,
            None,
        )
    };
    writeln!(io.out, "{value}").map_err(io_fail)?;
    if let Some(w) = witness {
        write!(io.out, "{w}").map_err(io_fail)?;
    }
    Ok(verdict(value))
}

fn cmd_sat(io: &mut Io<'_>, source: &FormulaSource, max_size: u32, budget: u64) -> Outcome {
    let f = load_sentence(io, source)?;
    domain(max_size, "--max-size")?;
    let found = Evaluator::with_budget(budget)
        .find_min_model(&f, max_size)
        .map_err(|e| match e.source {
            EvalError::BudgetExceeded { .. } => (ExitStatus::Budget, e.to_string()),
            _ => usage(e.to_string()),
        })?;
    match found {
        Some(m) => writeln!(io.out, "{m}").map_err(io_fail)?,
        None => writeln!(io.out, "none up to {max_size}").map_err(io_fail)?,
    }
    Ok(verdict(found.is_some()))
}

fn cmd_compile(io: &mut Io<'_>, instance: &Instance) -> Outcome {
    let (e, q) = load_instance(io, instance)?;
    let rows = plan_rows(&e, &q).len();
    let f = compile_with(&e, &q, Mutation::None);
    writeln!(io.out, "# rows: {rows}").map_err(io_fail)?;
    writeln!(io.out, "# query: {q}").map_err(io_fail)?;
    for eq in e.equations() {
        writeln!(io.out, "# equation: {eq}").map_err(io_fail)?;
    }
    writeln!(io.out, "{}", print_formula(&f)).map_err(io_fail)?;
    Ok(ExitStatus::Success)
}

fn cmd_oracle(io: &mut Io<'_>, instance: &Instance, size: u32, budget: u64) -> Outcome {
    let (e, q) = load_instance(io, instance)?;
    domain(size, "--size")?;
    let found = Oracle::with_budget(budget)
        .find_witness(&e, &q, size)
        .map_err(oracle_failure)?;
    match &found {
        Some(w) => writeln!(io.out, "{w}").map_err(io_fail)?,
        None => writeln!(io.out, "none").map_err(io_fail)?,
    }
    Ok(verdict(found.is_some()))
}

fn cmd_crosscheck(
    io: &mut Io<'_>,
    instance: &Instance,
    max_size: u32,
    budget: u64,
    mutation: Mutation,
) -> Outcome {
    let (e, q) = load_instance(io, instance)?;
    domain(max_size, "--max-size")?;
    let f = compile_with(&e, &q, mutation);
    let evaluator = Evaluator::with_budget(budget);
    let oracle = Oracle::with_budget(budget);
    writeln!(io.out, "# query: {q}, rows: {}", plan_rows(&e, &q).len()).map_err(io_fail)?;
    writeln!(io.out, "size formula oracle verdict").map_err(io_fail)?;
    let mut all_agree = true;
    for m in 1..=max_size {
        let size = DomainSize::new(m).expect("m >= 1");
        let truth = evaluator
            .evaluate(&f, size, &Valuation::new())
            .map_err(eval_failure)?;
        let witness = oracle.find_witness(&e, &q, m).map_err(oracle_failure)?;
        let agree = truth == witness.is_some();
        all_agree &= agree;
        writeln!(
            io.out,
            "{m} {truth} {} {}",
            if witness.is_some() { "found" } else { "none" },
            if agree { "agree" } else { "MISMATCH" }
        )
        .map_err(io_fail)?;
    }
    if all_agree {
        Ok(ExitStatus::Success)
    } else {
        let _ = writeln!(io.err, "henkin: compiled sentence and oracle disagree");
        Ok(ExitStatus::Mismatch)
    }
}

fn cmd_fixture(io: &mut Io<'_>, name: FixtureName) -> Outcome {
    let text = match name {
        FixtureName::CeitinPresentation => fixtures::ceitin_presentation().to_string(),
        FixtureName::CeitinH12 => format!("{}\n", print_formula(&fixtures::ceitin_h12())),
        FixtureName::CeitinE10 => format!("{}\n", print_formula(&fixtures::ceitin_e10())),
        FixtureName::Ehrenfeucht => {
            format!("{}\n", print_formula(&fixtures::ehrenfeucht_finiteness()))
        }
        FixtureName::Infinity => format!("{}\n", print_formula(&fixtures::infinity_sentence())),
    };
    write!(io.out, "{text}").map_err(io_fail)?;
    Ok(ExitStatus::Success)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str], stdin: &str) -> (i32, String, String) {
        let mut input = stdin.as_bytes();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut argv = vec!["henkin"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut input, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn eval_reads_expr_and_stdin() {
        let (code, out, _) = call(&["eval", "--expr", "exists t . t = t", "--size", "1"], "");
        assert_eq!((code, out.as_str()), (0, "true\n"));
        let (code, out, _) = call(&["eval", "-", "--size", "1"], "exists x y . x != y");
        assert_eq!((code, out.as_str()), (1, "false\n"));
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(call(&["eval", "--expr", "x = ", "--size", "2"], "").0, 2);
        assert_eq!(call(&["eval", "--expr", "x = y", "--size", "2"], "").0, 2);
        assert_eq!(call(&["eval", "--expr", "true", "--size", "0"], "").0, 2);
        assert_eq!(call(&["eval", "--expr", "true"], "").0, 2);
        assert_eq!(call(&["fixture", "nope"], "").0, 2);
        assert_eq!(call(&["bogus"], "").0, 2);
        assert_eq!(call(&["--help"], "").0, 0);
    }

    #[test]
    fn budget_exits_four() {
        let (code, _, err) = call(
            &[
                "eval",
                "--expr",
                "exists a b c . a != b & b != c & a != c",
                "--size",
                "5",
                "--budget",
                "2",
            ],
            "",
        );
        assert_eq!(code, 4);
        assert!(err.contains("budget"));
    }

    #[test]
    fn crosscheck_rejects_zero_sizes() {
        let (code, _, _) = call(
            &[
                "crosscheck",
                "--presentation",
                "-",
                "--query",
                "a = b",
                "--max-size",
                "0",
            ],
            "",
        );
        assert_eq!(code, 2);
    }
}
