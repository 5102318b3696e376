//! Batch front-end for `jetvar-core`: reads model files, runs one engine
//! operation and renders a deterministic certificate.

pub mod certificate;
pub mod commands;
pub mod model;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use jetvar_core::selftest::Fault;

pub use certificate::Certificate;
pub use commands::CliError;
pub use model::{Model, ModelError};

#[derive(Debug, Parser)]
#[command(
    name = "jetvar",
    version,
    about = "Exact Euler-Lagrange, symmetry and Noether certificates"
)]
pub struct Cli {
    /// Emit one JSON object per certificate instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Euler-Lagrange expressions of the model's Lagrangian.
    El { file: PathBuf },
    /// Classify a named candidate: exact, divergence or no symmetry.
    Symmetry {
        file: PathBuf,
        #[arg(long)]
        name: String,
    },
    /// Noether current of a named symmetry and its conservation certificate.
    Noether {
        file: PathBuf,
        #[arg(long)]
        name: String,
        /// Check this current (one expression per base coordinate) instead
        /// of the derived one.
        #[arg(long, num_args = 1.., value_name = "EXPR")]
        check_current: Option<Vec<String>>,
    },
    /// Whether the Lagrangian is a total divergence.
    Triviality { file: PathBuf },
    /// Run the randomized invariant suites.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Cases per suite (default: each suite's own count).
        #[arg(long)]
        cases: Option<usize>,
        /// Run only these suites.
        #[arg(long = "suite", value_name = "NAME")]
        suites: Vec<String>,
        /// Inject a sign fault to demonstrate the suites catch it
        /// (contact-sign, parts-sign, current-sign).
        #[arg(long)]
        fault: Option<String>,
    },
}

/// What a run printed and how it should exit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Execution {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub fn execute(cli: &Cli) -> Execution {
    match run(cli) {
        Ok((stdout, ok)) => Execution {
            stdout,
            stderr: String::new(),
            code: if ok { EXIT_OK } else { EXIT_NEGATIVE },
        },
        Err(e) => Execution {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: EXIT_USAGE,
        },
    }
}

fn render(cert: &Certificate, json: bool) -> String {
    if json {
        cert.to_json()
    } else {
        cert.to_text()
    }
}

fn run(cli: &Cli) -> Result<(String, bool), CliError> {
    let single = |cert: Certificate| Ok((render(&cert, cli.json), cert.ok));
    match &cli.command {
        Command::El { file } => {
            let (m, bytes) = Model::load(file)?;
            single(commands::el(&m, &bytes))
        }
        Command::Symmetry { file, name } => {
            let (m, bytes) = Model::load(file)?;
            single(commands::symmetry(&m, &bytes, name)?)
        }
        Command::Noether {
            file,
            name,
            check_current,
        } => {
            let (m, bytes) = Model::load(file)?;
            single(commands::noether(&m, &bytes, name, check_current.as_deref())?)
        }
        Command::Triviality { file } => {
            let (m, bytes) = Model::load(file)?;
            single(commands::triviality(&m, &bytes))
        }
        Command::Selftest {
            seed,
            cases,
            suites,
            fault,
        } => {
            let fault = match fault {
                Some(name) => Some(Fault::from_name(name).ok_or_else(|| {
                    let known: Vec<&str> = Fault::ALL.iter().map(|f| f.name()).collect();
                    CliError::Usage(format!("unknown fault {name:?} (known: {})", known.join(", ")))
                })?),
                None => None,
            };
            let run = commands::selftest(*seed, *cases, fault, suites)?;
            let out = if cli.json {
                run.certificates.iter().map(Certificate::to_json).collect()
            } else {
                run.to_text(*seed)
            };
            Ok((out, run.passed()))
        }
    }
}
