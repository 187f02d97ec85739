//! `entrochar` command-line front end. Every command prints one JSON
//! document (or a plain table with `--format table`) carrying a `status`
//! field. Analysis verdicts exit with code 0; malformed input exits with 2
//! and internal failures with 1.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "entrochar", version, about = "Entropic characterisation and network-coding outer bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Seed for randomised subfamily checks.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Tolerance for entropy equalities.
    #[arg(long, default_value_t = entrochar::ENTROPY_TOL, global = true)]
    pub tol_entropy: f64,
    /// LP feasibility tolerance.
    #[arg(long, default_value_t = entrochar::LP_TOL, global = true)]
    pub tol_lp: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Entropy of every nonempty set of coordinates.
    Entropy { dist: PathBuf },
    /// Recover the sorted probabilities from partition-variable entropies.
    Reconstruct {
        dist: PathBuf,
        /// Support size to reconstruct; defaults to the file's.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Decide whether two distributions agree up to relabelling.
    Equiv {
        p: PathBuf,
        q: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Scalar)]
        mode: Mode,
    },
    /// Outer-bound queries on networks with correlated sources.
    Netbound {
        #[command(subcommand)]
        query: NetQuery,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Scalar,
    Vector,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExampleAux {
    None,
    Bits,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EdgeModelArg {
    Economical,
    Explicit,
}

#[derive(clap::Args, Debug)]
pub struct Instance {
    /// Network document.
    #[arg(long)]
    pub network: PathBuf,
    /// Source distribution document; coordinates follow the network's sources.
    #[arg(long)]
    pub sources: PathBuf,
    /// Auxiliary-variable document.
    #[arg(long)]
    pub aux: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = EdgeModelArg::Economical)]
    pub edge_model: EdgeModelArg,
}

#[derive(Subcommand, Debug)]
pub enum NetQuery {
    /// Is the capacity tuple inside the outer bound?
    Check {
        #[command(flatten)]
        instance: Instance,
        /// Capacities of the finite edges in declaration order; defaults to
        /// the network's.
        #[arg(long = "C", value_delimiter = ',')]
        c: Option<Vec<f64>>,
        /// Also write the LP dump to this file.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Least multiple of a capacity direction inside the outer bound.
    Scale {
        #[command(flatten)]
        instance: Instance,
        /// Direction over the finite edges; defaults to the network's capacities.
        #[arg(long, value_delimiter = ',')]
        direction: Option<Vec<f64>>,
    },
    /// The built-in five-node example with three correlated sources.
    Example {
        #[arg(long, value_enum, default_value_t = ExampleAux::None)]
        aux: ExampleAux,
        #[arg(long = "C", value_delimiter = ',', default_value = "1,1,1,1")]
        c: Vec<f64>,
        /// Also write the LP dump to this file.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
}

/// Why a command could not produce a verdict.
#[derive(Debug)]
pub enum Failure {
    /// Unreadable or malformed input; exit code 2.
    Input(String),
    /// Solver or other internal failure; exit code 1.
    Internal(String),
}

impl From<entrochar::Error> for Failure {
    fn from(e: entrochar::Error) -> Self {
        match e {
            entrochar::Error::Numerical(_) => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(format!("{e:#}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok((doc, table)) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&doc).expect("JSON values serialise")),
                Format::Table => print!("{table}"),
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            let (code, msg) = match f {
                Failure::Input(m) => (2, m),
                Failure::Internal(m) => (1, m),
            };
            let doc: Value = json!({"status": "error", "message": msg});
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&doc).expect("JSON values serialise")),
                Format::Table => println!("error: {msg}"),
            }
            eprintln!("entrochar: {msg}");
            ExitCode::from(code)
        }
    }
}
