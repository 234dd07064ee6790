//! `prenam`: prenamings, unification and variance certificates from the shell.
//!
//! Exit status: 0 on success (and all verdicts true), 1 on a domain failure
//! (no prenaming, no unifier, a false verdict, dissimilar derivations),
//! 2 on usage, parse or file errors.

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use prenam_core::io::{self, Format};
use prenam_core::{
    check_variant, derive, pren, unify_terms, ClauseSelection, DeriveConfig, DeriveOutcome,
    DeriveStatus, Goal, Program, VarianceError,
};

#[derive(Parser)]
#[command(
    name = "prenam",
    version,
    about = "Prenamings, unification and variance of SLD-derivations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Format {
        match f {
            OutputFormat::Text => Format::Text,
            OutputFormat::Json => Format::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Least prenaming mapping TERM1 onto TERM2.
    Pren { term1: String, term2: String },
    /// Closure of a prenaming and its cycle decomposition.
    Closure { prenaming: String },
    /// Variables outside the injectivity domain of a prenaming.
    Indom { prenaming: String },
    /// Most general unifier of two terms.
    Unify { term1: String, term2: String },
    /// Substitution variant α(σ).
    VariantSubst { prenaming: String, subst: String },
    /// Builds one leftmost SLD-derivation and prints its trace.
    Derive {
        #[arg(long)]
        program: PathBuf,
        #[arg(long)]
        query: String,
        /// 1-based program clause numbers to replay, e.g. 1,3
        #[arg(long, value_delimiter = ',')]
        choices: Option<Vec<usize>>,
        #[arg(long, default_value_t = 100)]
        max_steps: usize,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
        #[arg(long, default_value_t = 0)]
        fresh_base: usize,
        /// Exit with status 1 unless the derivation reaches □.
        #[arg(long)]
        expect_success: bool,
    },
    /// Replays two derivations with the same clause choices and certifies they are variants.
    CheckVariant {
        #[arg(long)]
        program: PathBuf,
        #[arg(long)]
        query1: String,
        #[arg(long)]
        query2: String,
        /// Clause numbers for both derivations; by default those taken by a
        /// first-match derivation of QUERY1.
        #[arg(long, value_delimiter = ',')]
        choices: Option<Vec<usize>>,
        #[arg(long, default_value_t = 1000)]
        fresh_base2: usize,
        #[arg(long, default_value_t = 100)]
        max_steps: usize,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
}

enum Failure {
    /// Reported on stdout as `failure: ...`; exit status 1.
    Domain(String),
    /// Reported on stderr; exit status 2.
    Usage(String),
}

fn usage(e: impl Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn domain(e: impl Display) -> Failure {
    Failure::Domain(e.to_string())
}

fn read_program(path: &Path) -> Result<Program, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    io::parse_program_in(&text, &path.display().to_string()).map_err(usage)
}

fn query(text: &str) -> Result<Goal, Failure> {
    io::parse_query(text).map_err(usage)
}

fn run_derive(
    program: &Program,
    query: &Goal,
    selection: ClauseSelection,
    max_steps: usize,
    fresh_base: usize,
) -> Result<DeriveOutcome, Failure> {
    let config = DeriveConfig {
        selection,
        max_steps,
        fresh_base,
    };
    derive(program, query, &config).map_err(usage)
}

fn selection(choices: Option<Vec<usize>>) -> ClauseSelection {
    choices.map_or(ClauseSelection::FirstMatch, ClauseSelection::Replay)
}

fn run(command: Command) -> Result<String, Failure> {
    match command {
        Command::Pren { term1, term2 } => {
            let s = io::parse_term(&term1).map_err(usage)?;
            let t = io::parse_term(&term2).map_err(usage)?;
            pren(&s, &t).map(|p| format!("{p}\n")).map_err(domain)
        }
        Command::Closure { prenaming } => {
            let alpha = io::parse_prenaming(&prenaming).map_err(usage)?;
            let closure = alpha.closure();
            let cycles = closure.cycle_decomposition().map_err(domain)?;
            let cycles: Vec<String> = cycles.iter().map(ToString::to_string).collect();
            Ok(format!("{closure}\ncycles = {{{}}}\n", cycles.join(",")))
        }
        Command::Indom { prenaming } => {
            let alpha = io::parse_prenaming(&prenaming).map_err(usage)?;
            let noninj: Vec<String> = alpha.noninj().iter().map(ToString::to_string).collect();
            Ok(format!("noninj = {{{}}}\n", noninj.join(",")))
        }
        Command::Unify { term1, term2 } => {
            let s = io::parse_term(&term1).map_err(usage)?;
            let t = io::parse_term(&term2).map_err(usage)?;
            unify_terms(&s, &t)
                .map(|u| format!("{u}\n"))
                .map_err(domain)
        }
        Command::VariantSubst { prenaming, subst } => {
            let alpha = io::parse_prenaming(&prenaming).map_err(usage)?;
            let sigma = io::parse_subst(&subst).map_err(usage)?;
            alpha
                .variant_of(&sigma)
                .map(|s| format!("{s}\n"))
                .map_err(domain)
        }
        Command::Derive {
            program,
            query: q,
            choices,
            max_steps,
            format,
            fresh_base,
            expect_success,
        } => {
            let program = read_program(&program)?;
            let outcome = run_derive(
                &program,
                &query(&q)?,
                selection(choices),
                max_steps,
                fresh_base,
            )?;
            let d = &outcome.derivation;
            let mut out = io::print_derivation(d, format.into());
            match format {
                OutputFormat::Json => out.push('\n'),
                OutputFormat::Text => {
                    out.push_str(&format!("status: {}\n", outcome.status));
                    if let Ok(answer) = d.computed_answer() {
                        out.push_str(&format!("answer: {answer}\n"));
                    }
                }
            }
            if expect_success && outcome.status != DeriveStatus::Success {
                print!("{out}");
                return Err(domain(format!("derivation stopped: {}", outcome.status)));
            }
            Ok(out)
        }
        Command::CheckVariant {
            program,
            query1,
            query2,
            choices,
            fresh_base2,
            max_steps,
            format,
        } => {
            let program = read_program(&program)?;
            let (g1, g2) = (query(&query1)?, query(&query2)?);
            let first = run_derive(&program, &g1, selection(choices), max_steps, 0)?;
            let replay = ClauseSelection::Replay(first.choices.clone());
            let second = run_derive(&program, &g2, replay, max_steps, fresh_base2)?;
            let cert =
                check_variant(&first.derivation, &second.derivation).map_err(|e| match e {
                    VarianceError::NotSimilar(report) => domain(format!("not similar: {report}")),
                    other => domain(other),
                })?;
            let out = match format {
                OutputFormat::Text => format!("{cert}\n"),
                OutputFormat::Json => format!("{}\n", io::print_certificate_json(&cert)),
            };
            if cert.all_hold() {
                Ok(out)
            } else {
                print!("{out}");
                Err(domain(cert.verify().unwrap_err()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(message)) => {
            println!("failure: {message}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
