//! The `gandy` command line.
//!
//! Exit codes: 0 success, 1 unreadable or malformed input, 2 a machine
//! that fails validation or a failing check suite, 3 the categorical
//! engine disagreeing with (or failing where) the oracle succeeds, 64 bad
//! usage. Everything checked goes to stdout in a fixed order; timings go
//! to stderr.

use std::fmt::Write as _;
use std::io::Write;
use std::ops::Range;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

use crate::colimit::density_check;
use crate::fincat::{parse_presentation, validate_category, validate_functor, TapeSubcategory};
use crate::kan_eval::{equivalence_sweep, evaluate_traced, explain};
use crate::machine::{
    adjunction_sweep_bounded, parse_config, shape_category, CausalNeighbourhood, Machine,
    NeighbourhoodAssignment, ShapeCategory, ShiftedWindow, UpdateFunctor,
};
use crate::tape::{all_strings, parse_tape, TapeString};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_CHECK: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "gandy", version, about = "Run and check local tape machines")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a trajectory X, U(X), U(U(X)), ...
    Run(RunArgs),
    /// Print the windows explaining a string, or the whole shape category.
    Table(TableArgs),
    /// Print the causal neighbourhood of a range of cells of U(X).
    Explain(ExplainArgs),
    /// Run law-checking suites.
    Check(CheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Oracle,
    Categorical,
    Both,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    pub machine: PathBuf,
    #[arg(long)]
    pub input: String,
    #[arg(long, default_value_t = 1)]
    pub steps: usize,
    #[arg(long, value_enum, default_value_t = Engine::Both)]
    pub engine: Engine,
    /// Print the glued diagram for every categorical step.
    #[arg(long)]
    pub trace: bool,
    /// Remove the shape object `A,N` before evaluating (fault injection).
    #[arg(long, value_name = "A,N", hide = true)]
    pub drop_shape_object: Option<String>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("what").required(true).args(["generator", "all"])))]
pub struct TableArgs {
    pub machine: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub generator: Option<String>,
    /// Dump the shape category over the canonical generators.
    #[arg(long)]
    pub all: bool,
}

#[derive(Debug, Args)]
pub struct ExplainArgs {
    pub machine: PathBuf,
    #[arg(long)]
    pub input: String,
    /// Cells of U(X), either `START..END` or a single cell `K`.
    #[arg(long, value_parser = parse_range)]
    pub range: Range<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Suite {
    Category,
    Functor,
    Density,
    Adjunction,
    Equivalence,
    All,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    pub machine: PathBuf,
    #[arg(value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    /// Longest tape enumerated by every suite.
    #[arg(long, default_value_t = 10)]
    pub max_len: usize,
    /// Largest candidate window M (default |A| + 2r + 2).
    #[arg(long)]
    pub max_m: Option<usize>,
    /// Largest candidate state Z (default |X| + 2).
    #[arg(long)]
    pub max_z: Option<usize>,
    /// Also validate a presentation read from this file.
    #[arg(long)]
    pub presentation: Option<PathBuf>,
    /// Shift every chosen window by K cells (fault injection).
    #[arg(long, value_name = "K", allow_hyphen_values = true)]
    pub mutate_window_shift: Option<isize>,
    /// Remove the shape object `A,N` (fault injection).
    #[arg(long, value_name = "A,N", hide = true)]
    pub drop_shape_object: Option<String>,
}

fn parse_range(s: &str) -> Result<Range<usize>, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| format!("{t:?} is not a cell index"))
    };
    match s.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (num(a)?, num(b)?);
            if a > b {
                return Err(format!("empty range {s}"));
            }
            Ok(a..b)
        }
        None => num(s).map(|k| k..k + 1),
    }
}

/// A failure with the exit code it maps to.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

type Outcome = Result<(), Failure>;

/// Parses `args` (including the program name), runs the command and
/// returns the exit code.
pub fn run_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    execute(&cli, out, err)
}

pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let mut buf = String::new();
    let result = match &cli.command {
        Command::Run(a) => cmd_run(a, &mut buf, err),
        Command::Table(a) => cmd_table(a, &mut buf),
        Command::Explain(a) => cmd_explain(a, &mut buf),
        Command::Check(a) => cmd_check(a, &mut buf, err),
    };
    let _ = out.write_all(buf.as_bytes());
    let _ = out.flush();
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn load_machine(path: &Path) -> Result<Machine, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let spec =
        parse_config(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    Machine::new(spec).map_err(|report| Failure {
        code: EXIT_CHECK,
        message: format!("{}: invalid machine\n{report}", path.display()),
    })
}

fn load_tape(machine: &Machine, text: &str) -> Result<TapeString, Failure> {
    parse_tape(machine.alphabet(), text).map_err(|e| Failure::input(format!("input: {e}")))
}

fn load_shape(machine: &Machine, drop: Option<&str>) -> Result<ShapeCategory, Failure> {
    let shape = shape_category(machine, &TapeSubcategory::canonical(machine.alphabet()));
    let Some(name) = drop else { return Ok(shape) };
    let index = shape
        .objects
        .iter()
        .position(|o| o.name() == name)
        .ok_or_else(|| Failure::input(format!("no shape object {name:?}")))?;
    Ok(shape.without_object(index))
}

fn cmd_run(a: &RunArgs, out: &mut String, err: &mut dyn Write) -> Outcome {
    let machine = load_machine(&a.machine)?;
    let mut x = load_tape(&machine, &a.input)?;
    let shape = match a.engine {
        Engine::Oracle => None,
        _ => Some(load_shape(&machine, a.drop_shape_object.as_deref())?),
    };
    let start = Instant::now();
    writeln!(out, "{x}").unwrap();
    for step in 1..=a.steps {
        let oracle = machine.apply(&x).expect("alphabet checked on parse");
        let next = match &shape {
            None => oracle,
            Some(shape) => {
                let trace = evaluate_traced(shape, &x).expect("alphabet checked on parse");
                if a.trace {
                    for line in trace.render(shape).lines() {
                        writeln!(out, "  {line}").unwrap();
                    }
                }
                let got = trace.output.map(|r| r.value);
                match (a.engine, got) {
                    (Engine::Both, Ok(v)) if v == oracle => v,
                    (Engine::Categorical, Ok(v)) => v,
                    (_, got) => {
                        let got = match got {
                            Ok(v) => v.to_string(),
                            Err(e) => format!("error: {e}"),
                        };
                        return Err(Failure {
                            code: EXIT_MISMATCH,
                            message: format!(
                                "step {step} from {x}: oracle {oracle}, categorical {got}"
                            ),
                        });
                    }
                }
            }
        };
        x = next;
        writeln!(out, "{x}").unwrap();
    }
    let _ = writeln!(err, "elapsed {:.3}s", start.elapsed().as_secs_f64());
    Ok(())
}

fn cmd_table(a: &TableArgs, out: &mut String) -> Outcome {
    let machine = load_machine(&a.machine)?;
    if a.all {
        out.push_str(&load_shape(&machine, None)?.presentation().to_text());
        return Ok(());
    }
    let g = load_tape(&machine, a.generator.as_deref().unwrap_or(""))?;
    for n in machine.shape_table(&g).expect("alphabet checked on parse") {
        writeln!(out, "{n}").unwrap();
    }
    Ok(())
}

fn cmd_explain(a: &ExplainArgs, out: &mut String) -> Outcome {
    let machine = load_machine(&a.machine)?;
    let x = load_tape(&machine, &a.input)?;
    let e = explain(&machine, &x, a.range.clone()).map_err(|e| Failure::input(e.to_string()))?;
    writeln!(out, "{e}").unwrap();
    writeln!(out, "neighbourhood {}", e.neighbourhood()).unwrap();
    Ok(())
}

struct SuiteResult {
    summary: String,
    counterexample: Option<String>,
}

fn cmd_check(a: &CheckArgs, out: &mut String, err: &mut dyn Write) -> Outcome {
    let machine = load_machine(&a.machine)?;
    let shape = load_shape(&machine, a.drop_shape_object.as_deref())?;
    let extra = match &a.presentation {
        None => None,
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            let p = parse_presentation(&text)
                .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            Some((path.display().to_string(), p))
        }
    };
    let suites = match a.suite {
        Suite::All => vec![
            Suite::Category,
            Suite::Functor,
            Suite::Density,
            Suite::Adjunction,
            Suite::Equivalence,
        ],
        s => vec![s],
    };

    let generators = TapeSubcategory::canonical(machine.alphabet());
    let mut failed = Vec::new();
    for suite in suites {
        let start = Instant::now();
        let result = match suite {
            Suite::Category => {
                let mut parts = vec![
                    ("G".to_string(), generators.presentation().clone()),
                    ("P".to_string(), shape.presentation()),
                ];
                parts.extend(extra.clone());
                let mut summary = Vec::new();
                let mut counterexample = None;
                for (name, p) in &parts {
                    let report = validate_category(p);
                    summary.push(format!(
                        "{name} objects={} morphisms={} violations={}",
                        p.object_names().len(),
                        p.morphism_decls().len(),
                        report.len()
                    ));
                    if counterexample.is_none() {
                        counterexample = report.violations.first().map(|v| format!("{name}: {v}"));
                    }
                }
                SuiteResult {
                    summary: summary.join("; "),
                    counterexample,
                }
            }
            Suite::Functor => {
                let u = validate_functor(&UpdateFunctor::new(&machine), Some(a.max_len))
                    .expect("bound given");
                let pg = validate_functor(&shape.generator_functor(), None).expect("finite source");
                let pn = validate_functor(&shape.window_functor(), None).expect("finite source");
                let counterexample = [("U", &u), ("P->G", &pg), ("P->Tape", &pn)]
                    .into_iter()
                    .find_map(|(n, r)| r.violations.first().map(|v| format!("{n}: {v}")));
                SuiteResult {
                    summary: format!(
                        "U max_len={} violations={}; P->G violations={}; P->Tape violations={}",
                        a.max_len,
                        u.len(),
                        pg.len(),
                        pn.len()
                    ),
                    counterexample,
                }
            }
            Suite::Density => {
                let inputs = all_strings(machine.alphabet(), a.max_len);
                let failures: Vec<String> = {
                    use rayon::prelude::*;
                    inputs
                        .par_iter()
                        .filter_map(|x| {
                            let o = density_check(x, &generators);
                            (!o.holds).then(|| format!("{x}: {}", o.diagnostic.unwrap_or_default()))
                        })
                        .collect()
                };
                SuiteResult {
                    summary: format!(
                        "inputs={} failures={} max_len={}",
                        inputs.len(),
                        failures.len(),
                        a.max_len
                    ),
                    counterexample: failures.into_iter().next(),
                }
            }
            Suite::Adjunction => {
                let shifted;
                let assignment: &dyn NeighbourhoodAssignment = match a.mutate_window_shift {
                    Some(shift) => {
                        shifted = ShiftedWindow { shift };
                        &shifted
                    }
                    None => &CausalNeighbourhood,
                };
                let sweep = adjunction_sweep_bounded(
                    &machine,
                    assignment,
                    &generators,
                    a.max_len,
                    a.max_m,
                    a.max_z,
                );
                SuiteResult {
                    summary: format!(
                        "states={} parts={} candidates={} violations={} max_len={}",
                        sweep.states,
                        sweep.parts,
                        sweep.candidates,
                        sweep.failures.len(),
                        a.max_len
                    ),
                    counterexample: sweep
                        .failures
                        .first()
                        .and_then(|r| r.first_counterexample()),
                }
            }
            Suite::Equivalence => {
                let r = equivalence_sweep(&machine, &shape, a.max_len);
                SuiteResult {
                    summary: r.summary(),
                    counterexample: r.mismatches.first().map(|m| m.to_string()),
                }
            }
            Suite::All => unreachable!(),
        };
        let name = format!("{suite:?}").to_lowercase();
        let verdict = if result.counterexample.is_some() {
            "FAIL"
        } else {
            "pass"
        };
        writeln!(out, "{name:<12}{verdict}  {}", result.summary).unwrap();
        if let Some(c) = &result.counterexample {
            writeln!(out, "  counterexample: {c}").unwrap();
            failed.push(name.clone());
        }
        let _ = writeln!(err, "{name} elapsed {:.3}s", start.elapsed().as_secs_f64());
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_CHECK,
            message: format!("failing suites: {}", failed.join(", ")),
        })
    }
}
