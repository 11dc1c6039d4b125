//! `sunflower` command-line entry point.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use sunflower_core::Error;

/// Exit codes shared by every subcommand.
pub mod exit {
    pub const OK: u8 = 0;
    pub const OTHER: u8 = 1;
    pub const ABSENT: u8 = 3;
    pub const BUDGET: u8 = 4;
    pub const INPUT: u8 = 5;
}

#[derive(Debug, Parser)]
#[command(name = "sunflower", version)]
#[command(about = "Set families, k-sunflowers, Γ(b) checks, split search and base-set extraction")]
struct Cli {
    /// Cap on worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Write extraction traces as JSON lines to this file.
    #[arg(long, global = true)]
    trace: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exhaustive,
    Random,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit the extremal k-sunflower-free family of (k-1)^m m-sets
    GenExtremal {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Write the family here and print a JSON report instead.
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Emit a seeded uniform family of distinct m-sets
    GenRandom {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Draw one-per-strip sets on this split.
        #[arg(long)]
        split: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Search for a k-sunflower (exit 0 found, 3 absent, 4 budget)
    FindSunflower {
        /// Family file, text or JSON.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        /// Complete search (the default).
        #[arg(long, conflicts_with = "gamma")]
        exact: bool,
        /// Greedy disjoint extraction, valid when the family satisfies Γ(B).
        #[arg(long, value_name = "B")]
        gamma: Option<String>,
        /// With --gamma: extract from the residuals of F[S] for these labels and use S as core.
        #[arg(long, value_name = "LABELS", requires = "gamma", value_delimiter = ',')]
        restrict: Option<Vec<usize>>,
    },

    /// Check the Γ(b)-condition, globally or on a subsplit
    CheckGamma {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        b: String,
        /// Check on a subsplit of this split instead of globally.
        #[arg(long)]
        split: Option<PathBuf>,
        /// Strip indices of the subsplit (default: all strips).
        #[arg(long, value_delimiter = ',', requires = "split")]
        strips: Option<Vec<usize>>,
        /// Shadow family restricting the candidates (default: the input family).
        #[arg(long, requires = "split")]
        over: Option<PathBuf>,
    },

    /// Find an m-split retaining at least (n/m)^m |F| / C(n,m) members
    Split {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "exhaustive")]
        mode: Mode,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the retained family (text format) here.
        #[arg(long)]
        family_out: Option<PathBuf>,
        /// Write the split (text format) here.
        #[arg(long)]
        split_out: Option<PathBuf>,
    },

    /// Compare the brute-force transversal count with its closed form
    TransversalCheck {
        #[arg(long)]
        input: PathBuf,
        /// Number of strips; every j in 0..m when omitted.
        #[arg(long)]
        j: Option<usize>,
    },

    /// Run one base-set extraction
    Basesets {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        mprime: usize,
        /// Constants JSON: {mode, epsilon, h, c, k, m, famSize?}.
        #[arg(long)]
        constants: PathBuf,
        /// The m-split (default: contiguous strips).
        #[arg(long)]
        split: Option<PathBuf>,
    },

    /// Run the recursive base-set process and its audits
    ProcessR {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        constants: PathBuf,
        #[arg(long)]
        split: Option<PathBuf>,
    },

    /// Empirical sunflower thresholds against the (k-1)^m baseline
    VerifyBound {
        /// Values of k: `3`, `2,3,5` or `2..4`.
        #[arg(long, default_value = "2..4")]
        k: String,
        #[arg(long, default_value = "1..3")]
        m: String,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },

    /// Grow the universe to a multiple of m with unused elements
    PadUniverse {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

/// Maps library errors onto exit codes.
pub fn exit_code(err: &Error) -> u8 {
    if err.is_budget() {
        return exit::BUDGET;
    }
    match err {
        Error::UniverseMismatch { .. }
        | Error::LabelOutOfRange { .. }
        | Error::EmptyUniverse
        | Error::DuplicateMember(_)
        | Error::CardinalityExceeded { .. }
        | Error::InvalidArgument(_)
        | Error::InvalidSplit(_)
        | Error::Parse { .. }
        | Error::Json(_)
        | Error::Io(_)
        | Error::InputCondition(_)
        | Error::GammaViolated(_) => exit::INPUT,
        Error::TrialsExhausted { .. } => exit::BUDGET,
        Error::Process(failure) => match failure.source {
            Error::GuaranteeViolated(_) => exit::OTHER,
            ref inner => exit_code(inner),
        },
        _ => exit::OTHER,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::INPUT } else { exit::OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot size the thread pool: {e}");
            return ExitCode::from(exit::OTHER);
        }
    }
    match commands::run(cli.command, cli.trace.as_deref()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
