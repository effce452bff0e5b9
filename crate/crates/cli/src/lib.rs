//! Command-line front end.
//!
//! Every subcommand is a plain function returning its output as a string so
//! that tests can drive it without spawning a process. Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | usage, parse or verification failure |
//! | 2 | precision exhausted |
//! | 3 | domain error |

pub mod commands;
pub mod seed_spec;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use contfrac::{Error, PrecisionContext};
use thiserror::Error as ThisError;

pub use seed_spec::{SeedKind, SeedSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "contfrac", version, about = "Continued fractions and approximation coefficients")]
pub struct Cli {
    /// Initial working precision in bits.
    #[arg(long, global = true, default_value_t = 128)]
    pub precision: u32,

    /// Ceiling for precision escalation in bits.
    #[arg(long = "max-precision", global = true, default_value_t = 1 << 20)]
    pub max_precision: u32,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Digits and convergents.
    Expand {
        seed: SeedSpec,
        #[arg(long, default_value_t = 10)]
        terms: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Print what was computed before a precision failure.
        #[arg(long)]
        allow_partial: bool,
    },
    /// Approximation coefficients θ_0 … θ_{N−1} as upper bounds.
    Theta {
        seed: SeedSpec,
        #[arg(long, default_value_t = 10)]
        terms: usize,
        #[arg(long, default_value_t = 4)]
        digits: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Rebuild digits and coefficients from the pair (θ_n, θ_{n+1}).
    Recover {
        /// `u,v` as decimals.
        #[arg(long, conflicts_with = "theta_json", required_unless_present = "theta_json")]
        pair: Option<String>,
        /// Read the pair from the output of `theta --format json`.
        #[arg(long)]
        theta_json: Option<PathBuf>,
        /// Index n of the first coefficient of the pair.
        #[arg(long, default_value_t = 0)]
        at: usize,
        #[arg(long, default_value_t = 0)]
        back: usize,
        #[arg(long, default_value_t = 8)]
        fwd: usize,
        #[arg(long, default_value_t = 4)]
        digits: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Check the classical inequalities and digit recovery on a seed.
    Verify {
        #[arg(required_unless_present = "seeds_file")]
        seed: Option<SeedSpec>,
        /// One seed per line; reports come back in input order.
        #[arg(long, conflicts_with = "seed")]
        seeds_file: Option<PathBuf>,
        #[arg(long, default_value_t = 12)]
        terms: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Consecutive pairs (θ_{n−1}, θ_n) with their triangle certificate.
    Jager {
        seed: SeedSpec,
        #[arg(long, default_value_t = 10)]
        terms: usize,
        #[arg(long, default_value_t = 4)]
        digits: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Compare the pipeline against the brute-force oracle (JSON).
    Crosscheck {
        seed: SeedSpec,
        #[arg(long, default_value_t = 12)]
        terms: usize,
    },
}

#[derive(Debug, ThisError)]
#[error("{message}")]
pub struct CliError {
    pub code: i32,
    pub message: String,
    /// Output produced before the failure, printed when present.
    pub partial: Option<String>,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: 1,
            message: message.into(),
            partial: None,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InsufficientPrecision { .. } | Error::PrecisionExhausted { .. } => 2,
            Error::Domain(_) | Error::RegionViolation(_) | Error::InvalidSurd(_) => 3,
            Error::CrossCheckFailure { .. } | Error::Parse(_) => 1,
        };
        CliError {
            code,
            message: e.to_string(),
            partial: None,
        }
    }
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

pub fn run(cli: Cli) -> Result<String, CliError> {
    let ctx = PrecisionContext::new(cli.precision, cli.max_precision, 2)?;
    match cli.command {
        Command::Expand {
            seed,
            terms,
            format,
            allow_partial,
        } => commands::expand(&seed, terms, format, allow_partial, &ctx),
        Command::Theta {
            seed,
            terms,
            digits,
            format,
        } => commands::theta(&seed, terms, digits, format, &ctx),
        Command::Recover {
            pair,
            theta_json,
            at,
            back,
            fwd,
            digits,
            format,
        } => {
            let source = match (pair, theta_json) {
                (Some(p), _) => {
                    let (u, v) = p
                        .split_once(',')
                        .ok_or_else(|| CliError::usage("--pair expects u,v"))?;
                    commands::PairSource::Literal(u.trim().into(), v.trim().into())
                }
                (None, Some(path)) => commands::PairSource::ThetaJson(read(&path)?),
                (None, None) => return Err(CliError::usage("give --pair or --theta-json")),
            };
            commands::recover(source, at, back, fwd, digits, format, &ctx)
        }
        Command::Verify {
            seed,
            seeds_file,
            terms,
            format,
        } => {
            let specs = match (seed, seeds_file) {
                (Some(s), _) => vec![s],
                (None, Some(path)) => commands::parse_seeds_file(&read(&path)?)?,
                (None, None) => return Err(CliError::usage("give a seed or --seeds-file")),
            };
            commands::verify(&specs, terms, format, &ctx)
        }
        Command::Jager {
            seed,
            terms,
            digits,
            format,
        } => commands::jager_pairs(&seed, terms, digits, format, &ctx),
        Command::Crosscheck { seed, terms } => commands::crosscheck(&seed, terms, &ctx),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_args<I, T>(args: I) -> Result<String, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::usage(e.to_string()))?;
    run(cli)
}
