//! Command-line front end: walk analysis, dilations, intertwiners and
//! spectral frames from JSON inputs.

mod output;
mod spectral_cmds;
mod walk_cmds;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use output::Failure;

#[derive(Parser, Debug)]
#[command(
    name = "cuntzwalk",
    version,
    about = "Cuntz dilations, intertwiners and spectral frames of labeled walks"
)]
struct Cli {
    #[command(flatten)]
    opts: Options,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Options {
    /// Tolerance for residual checks (command-specific default).
    #[arg(long, global = true, value_parser = positive_f64)]
    pub tol: Option<f64>,
    /// Truncation depth: dilation level, or frame word length.
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    /// Number of steps for first-passage and first-return tables.
    #[arg(long, global = true)]
    pub nmax: Option<usize>,
    /// Output format (command-specific default).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the main output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Minimal sets, balance, irreducibility and first-passage decay.
    Analyze {
        walk: PathBuf,
        walk2: Option<PathBuf>,
    },
    /// Build the truncated dilation and verify the Cuntz relations.
    Dilate {
        walk: PathBuf,
        /// Directory for `S_<k>.csv` triplet dumps and `index.json`.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Intertwiners from the first walk to the second.
    Intertwine {
        walk: PathBuf,
        walk2: PathBuf,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Commutant of a walk with its product table.
    Commutant { walk: PathBuf },
    #[command(subcommand)]
    Spectral(SpectralCommand),
    /// Run every built-in check.
    VerifyAll,
}

#[derive(Subcommand, Debug)]
pub enum SpectralCommand {
    /// Check the standing assumptions on a system.
    Check { system: PathBuf },
    /// Finite minimal invariant sets.
    Minsets { system: PathBuf },
    /// Export a minimal set as a walk file.
    Walk {
        system: PathBuf,
        /// Index of the minimal set.
        #[arg(long, default_value_t = 0)]
        set: usize,
    },
    /// Frame frequencies and coefficients.
    Frame { system: PathBuf },
    /// Partial Parseval sums at the given points.
    Parseval {
        system: PathBuf,
        #[arg(
            long,
            value_delimiter = ',',
            allow_negative_numbers = true,
            required = true
        )]
        points: Vec<f64>,
        /// Minimum number of factors in the Fourier transform product.
        #[arg(long, default_value_t = cuntzwalk::spectral::DEFAULT_MU_TERMS)]
        terms: usize,
    },
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("`{s}` is not a positive number")),
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("CUNTZ_WALK_THREADS") else {
        return Ok(());
    };
    let n: usize = value.parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Failure::input(format!(
            "CUNTZ_WALK_THREADS must be a positive integer, got `{value}`"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::input(e.to_string()))
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    let o = &cli.opts;
    if o.depth == Some(0) {
        return Err(Failure::input("--depth must be at least 1"));
    }
    if o.nmax == Some(0) {
        return Err(Failure::input("--nmax must be at least 1"));
    }
    match cli.command {
        Command::Analyze { walk, walk2 } => walk_cmds::analyze(o, &walk, walk2.as_deref()),
        Command::Dilate { walk, dump } => walk_cmds::dilate(o, &walk, dump.as_deref()),
        Command::Intertwine {
            walk,
            walk2,
            inject_fault,
        } => walk_cmds::intertwine(o, &walk, &walk2, inject_fault),
        Command::Commutant { walk } => walk_cmds::commutant(o, &walk),
        Command::Spectral(cmd) => spectral_cmds::run(o, cmd),
        Command::VerifyAll => walk_cmds::verify_all(o),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("cuntzwalk: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
