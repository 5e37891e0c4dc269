//! `splitnet`: structural analysis, split-translation search and symbolic
//! verification for chemical reaction networks.
//!
//! Exit codes: 0 success / positive verdict, 1 bad input (flags, parse,
//! shape or symbol errors), 2 internal error, 3 no translation exists within
//! the budget, 4 node limit reached, 5 negative verdict.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use splitnet_milp::Rational;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_INTERNAL: u8 = 2;
pub const EXIT_NOT_FOUND: u8 = 3;
pub const EXIT_NODE_LIMIT: u8 = 4;
pub const EXIT_NEGATIVE: u8 = 5;

/// Environment variable naming an external LP-format solver executable.
pub const SOLVER_ENV: &str = "SPLITNET_LP_SOLVER";

#[derive(Debug, Parser)]
#[command(name = "splitnet", version, about = "Weakly reversible split network translations")]
pub struct Cli {
    /// Machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Linkage classes, weak reversibility and deficiencies.
    Analyze {
        /// Network text, generalized text (`.gcrn`) or GCRN JSON.
        file: PathBuf,
    },
    /// Search for a weakly reversible split translation.
    Translate {
        file: PathBuf,
        #[command(flatten)]
        slices: SliceArgs,
        #[command(flatten)]
        enc: EncodingArgs,
        /// Write the LP model of every attempted slice count.
        #[arg(long, value_name = "PATH")]
        emit_lp: Option<PathBuf>,
        /// Also write the translation JSON to this file.
        #[arg(long, short, value_name = "PATH")]
        output: Option<PathBuf>,
        /// Branch-and-bound node limit per slice count.
        #[arg(long)]
        node_limit: Option<u64>,
        #[arg(long, value_enum, default_value = "structured")]
        engine: EngineArg,
        /// External solver (engine `external`); defaults to $SPLITNET_LP_SOLVER.
        #[arg(long, value_name = "EXE")]
        solver: Option<PathBuf>,
    },
    /// Check the split-translation conditions (a)–(d).
    Verify { original: PathBuf, translation: PathBuf },
    /// Compare the two mass-action right-hand sides symbolically.
    Equiv { original: PathBuf, translation: PathBuf },
    /// Check that a parametrization lies on the steady-state set.
    CheckParam { network: PathBuf, parametrization: PathBuf },
    /// Write the MILP for one slice count in LP format.
    ExportLp {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        slices: usize,
        #[command(flatten)]
        enc: EncodingArgs,
        /// Output path; stdout if omitted.
        #[arg(long, short, value_name = "PATH")]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
#[group(multiple = false)]
pub struct SliceArgs {
    /// Exactly this many slices.
    #[arg(long)]
    pub slices: Option<usize>,
    /// Try 1, 2, ... up to this many slices (default 3).
    #[arg(long)]
    pub max_slices: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EncodingArgs {
    /// Vertex budget (default: the original vertex count).
    #[arg(long)]
    pub vertices: Option<usize>,
    #[arg(long, default_value = "1000")]
    pub big_m: Rational,
    #[arg(long, default_value = "1")]
    pub epsilon: Rational,
    /// Keep all complexes integral.
    #[arg(long)]
    pub integral: bool,
    /// Drop the index-ordering rows.
    #[arg(long)]
    pub no_symmetry_breaking: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum EngineArg {
    Structured,
    Generic,
    External,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
