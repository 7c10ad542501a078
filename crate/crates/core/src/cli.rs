//! Command-line interface.
//!
//! Exit codes: 0 on success, 1 when a check or verification fails, 2 on
//! input or format errors, 3 when a resource budget is exceeded. Results go
//! to stdout, diagnostics to stderr.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::lower_bound_report;
use crate::closure::{is_prefix_closed_dfa, is_prefix_closed_nfa};
use crate::dfa::Dfa;
use crate::error::{Error, Result};
use crate::inf::{inf_c, inf_co, inf_o, UncontrollableSet};
use crate::io::{export_dot, parse_dfa, parse_mask, parse_nfa, serialize_dfa, serialize_nfa};
use crate::mask::Mask;
use crate::verify::{verify_oracle, verify_primed_identity, verify_quotient_identity, VerifyReport};
use crate::witness;

#[derive(Parser)]
#[command(
    name = "infobs",
    about = "Infimal prefix-closed, controllable and observable superlanguages of regular languages",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute an infimal superlanguage of a specification
    Compute {
        #[command(subcommand)]
        op: ComputeOp,
    },
    /// Check a property of an automaton file
    Check {
        #[command(subcommand)]
        op: CheckOp,
    },
    /// Generate a member of a built-in automaton family
    Gen {
        /// Family to draw from
        family: Family,
        /// Family size; required for sized families
        #[arg(long)]
        n: Option<usize>,
        /// Output automaton file
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Measure state complexity across a witness family
    Bench {
        target: BenchTarget,
        /// Smallest family size, at least 2
        #[arg(long = "n-min")]
        n_min: usize,
        /// Largest family size
        #[arg(long = "n-max")]
        n_max: usize,
        /// CSV report destination
        #[arg(long)]
        csv: PathBuf,
    },
    /// Cross-validate constructions on seeded random instances
    Verify {
        target: VerifyTarget,
        /// Number of random instances
        #[arg(long, default_value_t = 200)]
        instances: usize,
        /// Largest state count for generated automata
        #[arg(long = "max-states", default_value_t = 6)]
        max_states: usize,
        /// Base seed; instance i uses seed + i
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Convert an automaton file to another format
    Export {
        format: ExportFormat,
        /// Input automaton file
        input: PathBuf,
        /// Output file
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Subcommand)]
enum ComputeOp {
    /// Infimal prefix-closed observable superlanguage under a mask
    #[command(name = "inf-o")]
    InfO {
        #[command(flatten)]
        spec: SpecFile,
        /// Mask file over the specification alphabet
        #[arg(short)]
        m: PathBuf,
        #[command(flatten)]
        output: OutputFile,
        /// Print intermediate sizes of the pipeline
        #[arg(long)]
        report: bool,
    },
    /// Infimal prefix-closed controllable superlanguage
    #[command(name = "inf-c")]
    InfC {
        #[command(flatten)]
        spec: SpecFile,
        #[command(flatten)]
        uncontrollable: UncontrollableArg,
        #[command(flatten)]
        output: OutputFile,
    },
    /// Infimal prefix-closed controllable and observable superlanguage
    /// within the language generated by a plant
    #[command(name = "inf-co")]
    InfCo {
        #[command(flatten)]
        spec: SpecFile,
        /// Plant automaton file
        #[arg(short)]
        g: PathBuf,
        /// Mask file over the specification alphabet
        #[arg(short)]
        m: PathBuf,
        #[command(flatten)]
        uncontrollable: UncontrollableArg,
        #[command(flatten)]
        output: OutputFile,
    },
}

#[derive(Args)]
struct SpecFile {
    /// Specification automaton file (deterministic)
    #[arg(short)]
    k: PathBuf,
}

#[derive(Args)]
struct OutputFile {
    /// Output automaton file
    #[arg(short)]
    o: PathBuf,
}

#[derive(Args)]
struct UncontrollableArg {
    /// Comma-separated uncontrollable events
    #[arg(long, value_delimiter = ',')]
    uncontrollable: Vec<String>,
}

#[derive(Subcommand)]
enum CheckOp {
    /// Check whether the accepted language is prefix-closed
    #[command(name = "prefix-closed")]
    PrefixClosed {
        /// Input automaton file
        input: PathBuf,
        /// Read the input as a nondeterministic automaton
        #[arg(long)]
        nfa: bool,
        /// Subset-construction state budget for the nfa check
        #[arg(long)]
        budget: Option<usize>,
    },
}

#[derive(ValueEnum, Clone, Copy)]
enum Family {
    /// Three-event family meeting the lower complexity bound
    Lowerbound,
    /// Two-event family where the quotient union needs one extra state
    Quotient,
    /// Unions of prime-length cycles with single-word infimal result
    Prime,
    /// Two-state example whose language is not prefix-closed
    Fig3,
    /// Three-state example that is prefix-closed without all states marked
    Fig4,
}

#[derive(ValueEnum, Clone, Copy)]
enum BenchTarget {
    Lowerbound,
}

#[derive(ValueEnum, Clone, Copy)]
enum VerifyTarget {
    /// Pipeline against the per-event reference and the bounded fixpoint
    Oracle,
    /// Closure-step identity on prefix-closed inputs plus its counterexample
    Lemma1,
    /// Primed-copy automaton against the per-event route
    Lemma3,
}

#[derive(ValueEnum, Clone, Copy)]
enum ExportFormat {
    Dot,
}

/// Parses the given argv and runs the command, returning the process exit
/// code. Split from main so tests can drive the CLI in process.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            eprint!("{e}");
            return 2;
        }
    };
    match dispatch(cli.cmd) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Budget(_) => 3,
                _ => 2,
            }
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))
}

fn load_dfa(path: &Path) -> Result<Dfa> {
    parse_dfa(&read(path)?)
}

fn load_mask(path: &Path, spec: &Dfa) -> Result<Mask> {
    parse_mask(&read(path)?, spec.alphabet())
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents)
        .map_err(|e| Error::input(format!("cannot write {}: {e}", path.display())))
}

fn dispatch(cmd: Cmd) -> Result<i32> {
    match cmd {
        Cmd::Compute { op } => run_compute(op),
        Cmd::Check { op } => run_check(op),
        Cmd::Gen { family, n, output } => run_gen(family, n, &output),
        Cmd::Bench {
            target: BenchTarget::Lowerbound,
            n_min,
            n_max,
            csv,
        } => run_bench(n_min, n_max, &csv),
        Cmd::Verify {
            target,
            instances,
            max_states,
            seed,
        } => run_verify(target, instances, max_states, seed),
        Cmd::Export {
            format: ExportFormat::Dot,
            input,
            output,
        } => {
            let a = parse_nfa(&read(&input)?)?;
            write_file(&output, &export_dot(&a))?;
            Ok(0)
        }
    }
}

fn run_compute(op: ComputeOp) -> Result<i32> {
    match op {
        ComputeOp::InfO {
            spec,
            m,
            output,
            report,
        } => {
            let k = load_dfa(&spec.k)?;
            let mask = load_mask(&m, &k)?;
            let result = inf_o(&k, &mask)?;
            write_file(&output.o, &serialize_dfa(&result.dfa))?;
            if report {
                let s = &result.stats;
                println!(
                    "input_states={} gh_nfa_states={} subset_states={} marked_subsets={} final_states={}",
                    s.input_states,
                    s.gh_nfa_states,
                    s.subset_states,
                    s.marked_subsets,
                    s.final_states
                );
            }
            Ok(0)
        }
        ComputeOp::InfC {
            spec,
            uncontrollable,
            output,
        } => {
            let k = load_dfa(&spec.k)?;
            let uc = UncontrollableSet::new(
                k.alphabet(),
                uncontrollable.uncontrollable.iter().map(|s| s.as_str()),
            )?;
            let result = inf_c(&k, &uc)?;
            write_file(&output.o, &serialize_dfa(&result))?;
            Ok(0)
        }
        ComputeOp::InfCo {
            spec,
            g,
            m,
            uncontrollable,
            output,
        } => {
            let k = load_dfa(&spec.k)?;
            let plant = load_dfa(&g)?;
            let mask = load_mask(&m, &k)?;
            let uc = UncontrollableSet::new(
                k.alphabet(),
                uncontrollable.uncontrollable.iter().map(|s| s.as_str()),
            )?;
            let result = inf_co(&k, &plant, &uc, &mask)?;
            write_file(&output.o, &serialize_dfa(&result))?;
            Ok(0)
        }
    }
}

fn run_check(op: CheckOp) -> Result<i32> {
    match op {
        CheckOp::PrefixClosed { input, nfa, budget } => {
            if budget.is_some() && !nfa {
                return Err(Error::input("--budget requires --nfa"));
            }
            let text = read(&input)?;
            let closed = if nfa {
                is_prefix_closed_nfa(&parse_nfa(&text)?, budget)?
            } else {
                is_prefix_closed_dfa(&parse_dfa(&text)?)
            };
            if closed {
                println!("prefix-closed");
                Ok(0)
            } else {
                println!("not prefix-closed");
                Ok(1)
            }
        }
    }
}

fn sized(n: Option<usize>) -> Result<usize> {
    n.ok_or_else(|| Error::input("this family is sized: pass --n"))
}

fn run_gen(family: Family, n: Option<usize>, output: &Path) -> Result<i32> {
    let text = match family {
        Family::Lowerbound => serialize_dfa(&witness::lower_bound(sized(n)?)?),
        Family::Quotient => serialize_dfa(&witness::quotient_tight(sized(n)?)?),
        Family::Prime => serialize_nfa(&witness::prime_nfa(sized(n)?)?),
        Family::Fig3 | Family::Fig4 => {
            if n.is_some() {
                return Err(Error::input("this family is a fixed example: drop --n"));
            }
            match family {
                Family::Fig3 => serialize_dfa(&witness::quotient_example()),
                _ => serialize_nfa(&witness::closure_example()),
            }
        }
    };
    write_file(output, &text)?;
    Ok(0)
}

fn run_bench(n_min: usize, n_max: usize, csv: &Path) -> Result<i32> {
    if n_min < 2 {
        return Err(Error::input("the family is defined for n >= 2"));
    }
    if n_min > n_max {
        return Err(Error::input("--n-min must not exceed --n-max"));
    }
    let report = lower_bound_report(n_min, n_max)?;
    for row in &report.rows {
        eprintln!(
            "n={}: final_states={} bounds=[{}, {}] wall_ms={}",
            row.n, row.final_states, row.lower_bound, row.upper_bound, row.wall_ms
        );
    }
    write_file(csv, &report.to_csv())?;
    match report.check() {
        Ok(()) => Ok(0),
        Err(msg) => {
            eprintln!("bound violation: {msg}");
            Ok(1)
        }
    }
}

fn run_verify(target: VerifyTarget, instances: usize, max_states: usize, seed: u64) -> Result<i32> {
    if max_states == 0 {
        return Err(Error::input("--max-states must be at least 1"));
    }
    let report: VerifyReport = match target {
        VerifyTarget::Oracle => verify_oracle(instances, max_states, seed)?,
        VerifyTarget::Lemma1 => verify_quotient_identity(instances, max_states, seed)?,
        VerifyTarget::Lemma3 => verify_primed_identity(instances, max_states, seed)?,
    };
    println!("{}", report.summary());
    if report.passed() {
        Ok(0)
    } else {
        for line in &report.failures {
            eprintln!("{line}");
        }
        Ok(1)
    }
}
