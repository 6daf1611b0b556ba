//! The `census` command line: argument definitions and command dispatch.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hypercensus_core::Error;

/// Exact census, constructions and bounds for (L,k)-free hypergraphs.
#[derive(Parser, Debug)]
#[command(name = "census", version)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Zero the elapsed-time fields so repeated runs compare byte for byte
    #[arg(long, global = true)]
    canonical: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct Family {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    r: usize,
    #[arg(long, default_value_t = 4)]
    k: usize,
    /// Forbidden edge counts, e.g. "1,4" (empty string for no restriction)
    #[arg(long, allow_hyphen_values = true)]
    list: String,
}

#[derive(Args, Debug, Clone)]
pub struct Budgets {
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Search-tree node limit
    #[arg(long, env = "HYPERCENSUS_NODE_BUDGET")]
    node_budget: Option<u64>,
    /// Wall-clock limit in seconds
    #[arg(long, env = "HYPERCENSUS_TIME_BUDGET")]
    time_budget: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Backtracking,
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CspGenerator {
    Extremal,
    Random,
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConstructionName {
    Turan,
    Qn,
    Steiner,
    RPartite,
    CliquePlusIsolated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormulaArg {
    All,
    TheoremMainUpper,
    CorollaryD,
    Linkgraph,
    QnLower,
    SteinerLower,
    BarnesG,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DModeArg {
    Exhaustive,
    Sample,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Count labeled (L,k)-free r-graphs on n vertices
    Count {
        #[command(flatten)]
        family: Family,
        #[command(flatten)]
        budgets: Budgets,
        #[arg(long, value_enum, default_value_t = MethodArg::Backtracking)]
        method: MethodArg,
    },
    /// Count isomorphism classes (n <= 8)
    IsoCount {
        #[command(flatten)]
        family: Family,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Print every (L,k)-free r-graph
    Enumerate {
        #[command(flatten)]
        family: Family,
        #[command(flatten)]
        budgets: Budgets,
        /// Stop after this many hypergraphs
        #[arg(long)]
        limit: Option<u64>,
    },
    /// Count satisfying assignments of pairwise constraint problems
    Csp {
        /// Constraint file
        #[arg(long, conflicts_with = "generator")]
        file: Option<PathBuf>,
        #[arg(long, value_enum)]
        generator: Option<CspGenerator>,
        /// Number of variables for generated instances
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random instances to draw
        #[arg(long, default_value_t = 1)]
        instances: u64,
        /// Include the satisfying assignments (single instance only)
        #[arg(long)]
        assignments: bool,
    },
    /// Build an explicit construction and check its defining property
    Construct {
        #[arg(value_enum)]
        name: ConstructionName,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        r: usize,
        /// Seeded random greedy order; colex order when absent
        #[arg(long)]
        seed: Option<u64>,
        /// Write the hypergraph text here
        #[arg(long)]
        graph_out: Option<PathBuf>,
    },
    /// Evaluate closed-form bounds (base-2 logarithms)
    Bounds {
        #[arg(value_enum, default_value_t = FormulaArg::All)]
        formula: FormulaArg,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 3)]
        r: u64,
        #[arg(long, default_value_t = 4)]
        k: u64,
        #[arg(long, default_value_t = 1)]
        i: u64,
        /// Exact count to compare against (decimal)
        #[arg(long)]
        census: Option<String>,
    },
    /// Check the small-n values of f(n,3,4,L) for all 32 lists
    VerifyTable {
        #[command(flatten)]
        budgets: Budgets,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest n attempted under the budget
        #[arg(long, default_value_t = 7)]
        max_n: usize,
    },
    /// Extension-set statistics d(a,n)
    DStats {
        #[arg(long)]
        a: usize,
        #[command(flatten)]
        family: Family,
        #[command(flatten)]
        budgets: Budgets,
        #[arg(long, value_enum, default_value_t = DModeArg::Exhaustive)]
        mode: DModeArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(std::io::Error),
    Usage(String),
    /// A computed result contradicts what it was checked against.
    Mismatch(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::BudgetExceeded { .. }) => 3,
            CliError::Mismatch(_) => 4,
            CliError::Io(_) => 1,
            CliError::Core(_) | CliError::Usage(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::Usage(msg) => f.write_str(msg),
            CliError::Mismatch(msg) => write!(f, "verification failed: {msg}"),
        }
    }
}

/// Runs one parsed invocation.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    commands::run(cli)
}

/// Parses `args` (program name first) and runs them.
pub fn run_args<I, T>(args: I) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Usage(e.to_string()))?;
    run(&cli)
}

/// Parses `std::env::args`, runs, and maps errors to exit codes.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("census: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
