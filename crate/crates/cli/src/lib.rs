//! Batch front end for `qmap-core`: parses target and quasimap files,
//! runs one subcommand and renders its report.
//!
//! [`run`] is the whole program minus process I/O, so tests drive it
//! directly and compare bytes.

mod commands;
pub mod input;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub use input::Diagnostic;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const ASSUMPTIONS: i32 = 1;
    pub const INVALID_QUASIMAP: i32 = 2;
    pub const ENUMERATION: i32 = 3;
    pub const CHECK: i32 = 4;
    /// Bad arguments, unreadable files, malformed input files.
    pub const USAGE: i32 = 64;
}

#[derive(Debug, Parser)]
#[command(name = "qmap", version, about = "Exact quasimap computations for GIT quotients")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Maximal unstable supports and the standing GIT assumptions.
    Stability {
        target: String,
        /// Print the maximal unstable supports.
        #[arg(long)]
        supports: bool,
        /// Print the assumption report; exit 1 when an assumption fails.
        #[arg(long)]
        verify: bool,
    },
    /// Degree, basepoints, constancy and ε-stability range of a quasimap.
    Quasimap { file: String },
    /// Effective lifted degrees over β with fixed-component dimensions.
    FixedLoci {
        target: String,
        /// Comma-separated group degree, e.g. `2` or `1,-1`.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        degree: Vec<i64>,
        #[command(flatten)]
        bound: BoundArg,
    },
    /// I-function coefficients up to total degree D.
    Ifunction {
        target: String,
        #[arg(long = "max-degree", value_parser = clap::value_parser!(u32).range(1..))]
        max_degree: u32,
        #[arg(long, group = "format")]
        json: bool,
        #[arg(long, group = "format")]
        latex: bool,
        /// Expand modulo H^{n+1}; projective targets only.
        #[arg(long = "reduce-pn", group = "format")]
        reduce_pn: bool,
        /// Also verify the Euler-class identities and Weyl invariance.
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        bound: BoundArg,
    },
}

#[derive(Debug, Args)]
pub struct BoundArg {
    /// Box bound for enumerating lifted degrees; overrides the file's `bound`.
    #[arg(long, value_parser = clap::value_parser!(i64).range(0..))]
    pub bound: Option<i64>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(Diagnostic),
    #[error("{0}")]
    InvalidQuasimap(Diagnostic),
    #[error("{0}")]
    Enumeration(String),
    #[error("{0}")]
    Check(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Input(_) => exit::USAGE,
            CliError::InvalidQuasimap(_) => exit::INVALID_QUASIMAP,
            CliError::Enumeration(_) => exit::ENUMERATION,
            CliError::Check(_) => exit::CHECK,
        }
    }
}

/// Everything a run prints, plus its exit code.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn enum_cap(raw: Option<&str>) -> Result<usize, CliError> {
    match raw {
        None => Ok(qmap_core::git::DEFAULT_ENUM_CAP),
        Some(s) => s
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&c| c > 0)
            .ok_or_else(|| CliError::Usage(format!("QMAP_ENUM_CAP must be a positive integer, got `{s}`"))),
    }
}

/// Runs `qmap` on `args` (including the program name). `enum_cap` is the
/// raw value of `QMAP_ENUM_CAP`, if set.
pub fn run<I, T>(args: I, enum_cap_var: Option<&str>) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output { code, stdout: String::new(), stderr: text }
            } else {
                Output { code, stdout: text, stderr: String::new() }
            };
        }
    };
    let mut out = Output::default();
    let result = enum_cap(enum_cap_var).and_then(|cap| commands::dispatch(cli.command, cap, &mut out));
    match result {
        Ok(code) => out.code = code,
        Err(e) => {
            out.stderr.push_str(&format!("error: {e}\n"));
            out.code = e.exit_code();
        }
    }
    out
}
