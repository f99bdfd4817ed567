//! Command-line interface.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use super::commands::{run_any, Command};
use super::document::SystemDocument;
use super::fuzz::{run_fuzz, write_artifacts};
use super::generate::{gen_leonard_split, RunConfig};
use super::reportdoc::{exit_code, ReportDocument};
use crate::conjlab::DEFAULT_CHAIN_DEPTH;
use crate::error::{Error, Result};
use crate::scalars::{Field, FieldDescriptor, PrimeField, Rationals};
use crate::tdcore::{IrreducibilityStrategy, ValidateOptions};

/// Exit status for malformed input.
pub const EXIT_MALFORMED: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "tdlab", version, about = "Exact verification of tridiagonal systems")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Strategy {
    Auto,
    Burnside,
    EigenSubset,
    Exhaustive,
    Assume,
}

impl From<Strategy> for IrreducibilityStrategy {
    fn from(s: Strategy) -> Self {
        match s {
            Strategy::Auto => IrreducibilityStrategy::Auto,
            Strategy::Burnside => IrreducibilityStrategy::Burnside,
            Strategy::EigenSubset => IrreducibilityStrategy::EigenSubset,
            Strategy::Exhaustive => IrreducibilityStrategy::ExhaustiveGfp,
            Strategy::Assume => IrreducibilityStrategy::Assume,
        }
    }
}

#[derive(Args, Debug)]
struct Input {
    /// System document (tdlab/1 JSON).
    file: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    irreducibility: Strategy,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Validate a system.
    Verify {
        #[command(flatten)]
        input: Input,
        /// Print the JSON report instead of one line per check.
        #[arg(long)]
        json: bool,
    },
    /// Split decomposition, parameter array and its identities.
    Params {
        #[command(flatten)]
        input: Input,
    },
    /// The eight relatives and the relations between their split sequences.
    Orbit {
        #[command(flatten)]
        input: Input,
    },
    /// Invariant bilinear form, anti-automorphism and dual system.
    Form {
        #[command(flatten)]
        input: Input,
    },
    /// Subalgebra and corner-algebra checks.
    Conjectures {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = DEFAULT_CHAIN_DEPTH)]
        chain_depth: usize,
    },
    /// Generate a system document.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Seeded random instances through every analysis.
    Fuzz {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        d_max: usize,
        #[arg(long, default_value = "rational")]
        field: FieldDescriptor,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, value_enum, default_value = "auto")]
        irreducibility: Strategy,
        #[arg(long, default_value_t = DEFAULT_CHAIN_DEPTH)]
        chain_depth: usize,
        /// Directory for the report and counterexample artifacts.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum GenKind {
    /// Bidiagonal construction from eigenvalues and the sequence `phi`.
    Leonard {
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        theta: Vec<String>,
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        theta_star: Vec<String>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        phi: Vec<String>,
        #[arg(long, default_value = "rational")]
        field: FieldDescriptor,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn load(input: &Input) -> Result<(super::document::AnySystem, ValidateOptions)> {
    let doc = SystemDocument::load(&input.file)?;
    Ok((doc.to_any()?, ValidateOptions { strategy: input.irreducibility.into() }))
}

fn analyze(input: &Input, command: Command) -> Result<ReportDocument> {
    let (sys, options) = load(input)?;
    Ok(run_any(&sys, command, options))
}

fn emit(doc: &ReportDocument) -> i32 {
    print!("{}", doc.to_json());
    doc.exit_code()
}

fn gen_leonard_in<F: Field>(
    field: &F,
    theta: &[String],
    theta_star: &[String],
    phi: &[String],
) -> Result<(SystemDocument, ReportDocument)> {
    let parse = |v: &[String]| v.iter().map(|t| field.parse(t)).collect::<Result<Vec<_>>>();
    let (sys, _, report) =
        gen_leonard_split(field, &parse(theta)?, &parse(theta_star)?, &parse(phi)?, ValidateOptions::default())?;
    Ok((SystemDocument::from_system(&sys), ReportDocument::new(report)))
}

fn run_cmd(cmd: Cmd) -> Result<i32> {
    Ok(match cmd {
        Cmd::Verify { input, json } => {
            let doc = analyze(&input, Command::Verify)?;
            if json {
                print!("{}", doc.to_json());
            } else {
                print!("{}", doc.to_text());
            }
            doc.exit_code()
        }
        Cmd::Params { input } => emit(&analyze(&input, Command::Params)?),
        Cmd::Orbit { input } => emit(&analyze(&input, Command::Orbit)?),
        Cmd::Form { input } => emit(&analyze(&input, Command::Form)?),
        Cmd::Conjectures { input, chain_depth } => {
            if chain_depth == 0 {
                return Err(Error::InvalidInput("chain depth must be positive".into()));
            }
            emit(&analyze(&input, Command::Conjectures { depth: chain_depth })?)
        }
        Cmd::Gen { kind: GenKind::Leonard { theta, theta_star, phi, field, output } } => {
            let (doc, report) = match field.validated()? {
                FieldDescriptor::Rational => gen_leonard_in(&Rationals, &theta, &theta_star, &phi)?,
                FieldDescriptor::Prime { modulus } => {
                    gen_leonard_in(&PrimeField::new(modulus)?, &theta, &theta_star, &phi)?
                }
            };
            match output {
                Some(path) => {
                    doc.save(&path)?;
                    print!("{}", report.to_json());
                }
                None => {
                    print!("{}", doc.to_json());
                    eprint!("{}", report.to_text());
                }
            }
            report.exit_code()
        }
        Cmd::Fuzz { trials, seed, d_max, field, jobs, irreducibility, chain_depth, output } => {
            let config = RunConfig { seed, trials, d_max, field, strategy: irreducibility.into(), jobs, chain_depth };
            let outcome = run_fuzz(&config)?;
            match output {
                Some(dir) => {
                    write_artifacts(&outcome, &dir)?;
                    eprintln!(
                        "{} of {} trials accepted, {} counterexample(s); report in {}",
                        outcome.accepted(),
                        trials,
                        outcome.counterexamples.len(),
                        dir.display()
                    );
                }
                None => print!("{}", outcome.report.to_json()),
            }
            exit_code(&outcome.report.checks)
        }
    })
}

/// Parse arguments, run, and return the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_MALFORMED } else { 0 };
        }
    };
    match run_cmd(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("tdlab: {e}");
            EXIT_MALFORMED
        }
    }
}
