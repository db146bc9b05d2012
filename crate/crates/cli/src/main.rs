//! `ellchain`: limit linear series on elliptic chains from the command line.

mod commands;
mod output;
mod span;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ellchain_core::independence::{OracleConfig, DEFAULT_PRIME};

use output::{Exit, Format, UsageError};
use span::Span;

#[derive(Parser, Debug)]
#[command(name = "ellchain", version, about = "Limit linear series of vector bundles on chains of elliptic curves")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, env = "ELLCHAIN_FORMAT", default_value = "table")]
    pub format: Format,
    /// Seed for every random scalar drawn by the rank oracle and the gluing maps.
    #[arg(long, global = true, env = "ELLCHAIN_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Independent oracle draws per run; the maximum rank is reported.
    #[arg(long, global = true, env = "ELLCHAIN_TRIALS", default_value_t = 3)]
    pub trials: u32,
    /// Prime modulus of the oracle (default 2^61 - 1).
    #[arg(long, global = true, env = "ELLCHAIN_PRIME", default_value_t = DEFAULT_PRIME)]
    pub prime: u64,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print diagnostics to stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,
}

impl Global {
    pub fn oracle(&self) -> Result<OracleConfig, UsageError> {
        let cfg = OracleConfig { prime: self.prime, seed: self.seed, trials: self.trials };
        cfg.validate().map_err(|e| UsageError(e.to_string()))?;
        Ok(cfg)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The canonical series on a chain of g elliptic curves, with its validation.
    Canonical {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        g: u32,
    },
    /// Count (r+1) x (g-d+r) tableaux with entries in 1..=g.
    Tableaux {
        #[arg(long)]
        g: i64,
        #[arg(long)]
        r: i64,
        #[arg(long)]
        d: i64,
        /// List every tableau.
        #[arg(long)]
        enumerate: bool,
    },
    /// Twist a series to prescribed component degrees.
    Redistribute {
        /// Series JSON, as written by `canonical` or bare.
        #[arg(long, conflicts_with = "g")]
        series: Option<PathBuf>,
        /// Use the canonical series on g components.
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        g: Option<u32>,
        /// Target degrees, one per component.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        dprime: Vec<i64>,
    },
    /// Check the conditions of a limit linear series read from JSON.
    Validate {
        file: PathBuf,
    },
    /// Certify the Petri bound for one (g, r, d, k) or sweep ranges like 4..10.
    Petri {
        #[arg(long)]
        g: Span,
        #[arg(long)]
        r: Span,
        /// Defaults to 0..4g in a sweep.
        #[arg(long)]
        d: Option<Span>,
        /// Defaults to 1..4g in a sweep.
        #[arg(long)]
        k: Option<Span>,
        #[arg(long)]
        sweep: bool,
        /// Keep tuples that fail the hypothesis in sweep output.
        #[arg(long)]
        all: bool,
    },
    /// Certify surjectivity for the bundle E0 for one (g, r, d) or sweep ranges.
    Endo {
        #[arg(long)]
        g: Span,
        #[arg(long)]
        r: Span,
        /// Defaults to g..g+r-1 in a sweep.
        #[arg(long)]
        d: Option<Span>,
        #[arg(long)]
        sweep: bool,
    },
}

fn run(cli: Cli) -> anyhow::Result<Exit> {
    let g = &cli.global;
    match cli.command {
        Command::Canonical { g: genus } => commands::canonical(g, genus as usize),
        Command::Tableaux { g: genus, r, d, enumerate } => commands::tableaux(g, genus, r, d, enumerate),
        Command::Redistribute { series, g: genus, dprime } => commands::redistribute(g, series, genus, dprime),
        Command::Validate { file } => commands::validate(g, &file),
        Command::Petri { g: gs, r, d, k, sweep, all } => commands::petri(g, gs, r, d, k, sweep, all),
        Command::Endo { g: gs, r, d, sweep } => commands::endo(g, gs, r, d, sweep),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Exit::Usage as u8 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(Exit::Usage as u8)
        }
    }
}
