//! Command-line interface.
//!
//! Exit codes: 0 success or intersecting, 1 not intersecting, 2 usage or
//! parse error, 3 capacity exceeded, 4 internal cross-check disagreement.

mod commands;
pub mod documents;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::brute::DEFAULT_FIELD_SIZE;
use crate::error::Error;
use crate::ext_oracle::{DEFAULT_PRIME, DEFAULT_TRIALS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_INTERSECTING: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;
pub const EXIT_DISAGREEMENT: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}:{line}:{column}: {message}")]
    Parse { path: String, line: usize, column: usize, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Library(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Library(Error::Capacity(_)) => EXIT_CAPACITY,
            _ => EXIT_USAGE,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "quiverhorn", version, about = "Intersecting Schubert positions for quiver subrepresentations")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOptions,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOptions {
    /// Random seed for the oracles.
    #[arg(long, global = true, env = "QUIVERHORN_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Number of random samples per oracle call.
    #[arg(long, global = true, default_value_t = DEFAULT_TRIALS)]
    pub trials: usize,
    /// Prime modulus for the rank oracle.
    #[arg(long, global = true, default_value_t = DEFAULT_PRIME)]
    pub prime: u64,
    /// Field size for exhaustive point counts.
    #[arg(long = "field-q", global = true, default_value_t = DEFAULT_FIELD_SIZE)]
    pub field_q: u32,
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleKind {
    None,
    Ext,
    Brute,
}

/// A quiver with optional dimensions and families.
#[derive(Debug, Clone, Args)]
pub struct Target {
    /// Quiver document, or a built-in name: square, sun, w2, arrow, hornN.
    pub quiver: String,
    /// Family document with `J` and `K`.
    pub family: Option<PathBuf>,
    /// Dimension vector, e.g. `2,3,3,2`.
    #[arg(long)]
    pub dims: Option<String>,
    /// Ambient family in shorthand, e.g. `12;123;123;12`.
    #[arg(long = "ambient", visible_alias = "j")]
    pub ambient: Option<String>,
    /// Candidate family in shorthand, e.g. `1;23;23;12`.
    #[arg(long = "candidate", visible_alias = "k")]
    pub candidate: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct QuiverDims {
    /// Quiver document, or a built-in name.
    pub quiver: String,
    #[arg(long)]
    pub dims: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether K is intersecting inside J.
    Check {
        #[command(flatten)]
        target: Target,
        /// Comma-separated arrow indices whose endpoints keep equal cardinalities.
        #[arg(long)]
        restrict_arrows: Option<String>,
        #[arg(long, value_enum, default_value_t = OracleKind::None)]
        oracle: OracleKind,
    },
    /// List all intersecting subfamilies of the standard family.
    Enumerate {
        #[command(flatten)]
        target: QuiverDims,
        #[arg(long)]
        edim_zero: bool,
        #[arg(long)]
        up_to_symmetry: bool,
    },
    /// Schofield subdimension vectors, or membership of one vector.
    Schofield {
        #[command(flatten)]
        target: QuiverDims,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        up_to_symmetry: bool,
    },
    /// Intersection of Schubert classes in a Grassmannian.
    Belkale {
        /// Number of sources of the star quiver.
        #[arg(long = "s")]
        s: usize,
        /// Rank.
        #[arg(long = "r")]
        r: u32,
        /// Ambient dimension.
        #[arg(long = "n")]
        n: u32,
        /// Family in shorthand, one subset per vertex.
        #[arg(long = "k", alias = "K")]
        k: String,
    },
    /// The cone of highest weights.
    Cone {
        #[command(flatten)]
        target: QuiverDims,
        #[arg(long)]
        rays: bool,
        #[arg(long)]
        facets: bool,
        #[arg(long)]
        sigma: bool,
        #[arg(long)]
        up_to_symmetry: bool,
    },
    /// Augmented quiver, lifted dimension vector and the Schofield cross-check.
    Augment {
        #[command(flatten)]
        target: Target,
        /// Write the augmented quiver document here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Generic hom and ext of the subquotient pair over a prime field.
    OracleExt {
        #[command(flatten)]
        target: Target,
    },
    /// Exhaustive point counts over a small field.
    OracleBrute {
        #[command(flatten)]
        target: Target,
    },
    /// Quiver automorphisms.
    Symmetry {
        #[command(flatten)]
        target: QuiverDims,
    },
}

/// Parses `args`, runs the command and writes the report; returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{rendered}") } else { write!(out, "{rendered}") };
            return code;
        }
    };
    if let Some(n) = cli.global.threads {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let start = Instant::now();
    match commands::dispatch(&cli) {
        Ok((report, code)) => {
            let text = match cli.global.format {
                Format::Structured => report.render_structured(start.elapsed().as_millis()) + "\n",
                Format::Text => report.render_text(),
            };
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// Entry point used by the binary.
pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
