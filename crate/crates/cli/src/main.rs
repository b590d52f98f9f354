//! `conekit` batch front end.

mod analyze;
mod cone;
mod cp1;
mod output;
mod valuation;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use conekit::Error;

#[derive(Parser)]
#[command(name = "conekit", version, about = "Invariants of conical Calabi-Yau metrics on weighted line arrangements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Multiple points, tangent cones and global invariants of an arrangement
    Analyze(analyze::Args),
    /// Tangent-cone density of a curve germ
    Valuation(valuation::Args),
    /// Flat conical metrics on the projective line
    Cp1(cp1::Args),
    /// Model-cone linear analysis
    Cone(cone::Args),
}

/// Outcome of a command: the rendered document and the error, if any, that
/// cut the computation short.
pub struct Outcome {
    pub text: String,
    pub error: Option<Error>,
}

impl Outcome {
    pub fn ok(text: String) -> Self {
        Outcome { text, error: None }
    }
}

fn exit_code(error: &Error) -> u8 {
    match error {
        Error::Parse(_) | Error::InvalidInput(_) | Error::DuplicateLine { .. } | Error::WeightOutOfRange { .. } => 1,
        Error::NonKlt(_) | Error::NotStable { .. } => 2,
        Error::NumericFailure { .. } | Error::PathTooClose { .. } => 3,
        Error::NotGeneric { .. }
        | Error::NotCalabiYau { .. }
        | Error::NotProduct
        | Error::UnsupportedCone(_)
        | Error::InvalidGerm(_)
        | Error::OutOfModel(_)
        | Error::InvalidEigenvalue(_)
        | Error::InvalidMode(_) => 4,
    }
}

fn configure_threads() -> Result<(), Error> {
    let Ok(value) = std::env::var("CONEKIT_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::InvalidInput(format!("CONEKIT_THREADS = {value:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::InvalidInput(e.to_string()))
}

fn run(cli: Cli) -> Result<Outcome, Error> {
    configure_threads()?;
    match cli.command {
        Command::Analyze(args) => analyze::run(args),
        Command::Valuation(args) => valuation::run(args),
        Command::Cp1(args) => cp1::run(args),
        Command::Cone(args) => cone::run(args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(outcome) => {
            print!("{}", outcome.text);
            match outcome.error {
                None => ExitCode::SUCCESS,
                Some(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(exit_code(&e))
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
