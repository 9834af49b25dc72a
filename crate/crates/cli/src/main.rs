use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod config;
mod decompose;
mod error;
mod lowerbound;
mod run;
mod verify;

use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "matpred", version, about = "Online matrix prediction experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Play a learner against an adversary and report regret.
    Run(RunArgs),
    /// Build and validate a (beta, tau)-decomposition.
    Decompose {
        #[command(subcommand)]
        class: DecomposeClass,
    },
    /// Run a lower-bound adversary over several seeds.
    Lowerbound {
        #[command(subcommand)]
        problem: LowerBoundProblem,
    },
    /// Run invariant suites.
    Verify {
        #[arg(value_enum, default_value_t = verify::Suite::All)]
        suite: verify::Suite,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProblemArg {
    Maxcut,
    Gambling,
    Cf,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum AdversaryArg {
    Random,
    LowerBound,
    File,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ComparatorArg {
    Bruteforce,
    Subgradient,
    None,
}

/// Every field is optional so that values from `--config` can fill gaps;
/// flags win on conflict.
#[derive(Args, Debug, Default)]
pub struct RunArgs {
    /// Key = value file with the same keys as the long flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub problem: Option<ProblemArg>,
    /// Rows; defaults to `n`.
    #[arg(long)]
    pub m: Option<usize>,
    /// Nodes, teams or columns.
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of rounds `T`.
    #[arg(long, short = 'T')]
    pub horizon: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Learning rate; defaults to the rate that balances the regret bound.
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long, value_enum)]
    pub adversary: Option<AdversaryArg>,
    /// Sequence CSV for `--adversary file`.
    #[arg(long)]
    pub sequence: Option<PathBuf>,
    /// Where to stream the per-round CSV trace.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub comparator: Option<ComparatorArg>,
    /// Trace-norm bound of the collaborative filtering class.
    #[arg(long)]
    pub tau0: Option<f64>,
    /// Lipschitz bound of the collaborative filtering losses.
    #[arg(long)]
    pub g: Option<f64>,
    /// Subgradient iterations for the collaborative filtering comparator.
    #[arg(long)]
    pub iterations: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum DecomposeClass {
    /// Cut matrix of a node set.
    Cut {
        #[arg(long)]
        n: usize,
        /// Comma-separated 1-based members.
        #[arg(long, default_value = "")]
        set: String,
        #[command(flatten)]
        out: decompose::OutputArgs,
    },
    /// Matrix with entries in [-1, 1] read from a file.
    Tracenorm {
        #[arg(long)]
        file: PathBuf,
        #[command(flatten)]
        out: decompose::OutputArgs,
    },
    /// Upper triangular all-ones matrix of order 2^k.
    Triangular {
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        out: decompose::OutputArgs,
    },
    /// Order matrix of a permutation.
    Permutation {
        /// Comma-separated 1-based images `π(1),…,π(n)`.
        #[arg(long)]
        pi: String,
        #[command(flatten)]
        out: decompose::OutputArgs,
    },
    /// Sylvester Hadamard matrix of order n through the trace-norm split.
    Hadamard {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: decompose::OutputArgs,
    },
}

#[derive(Subcommand, Debug)]
enum LowerBoundProblem {
    Maxcut {
        #[arg(long)]
        n: usize,
        #[arg(long, short = 'T')]
        horizon: usize,
        /// Seeds as `a-b`, a comma list or a single value.
        #[arg(long, default_value = "1-20")]
        seeds: String,
    },
    Cf {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        tau0: f64,
        #[arg(long, default_value_t = 1.0)]
        g: f64,
        #[arg(long, short = 'T')]
        horizon: usize,
        #[arg(long, default_value = "1-20")]
        seeds: String,
    },
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(args) => {
            let cfg = config::RunConfig::resolve(args)?;
            run::cmd_run(&cfg)
        }
        Command::Decompose { class } => match class {
            DecomposeClass::Cut { n, set, out } => decompose::cut(n, &set, &out),
            DecomposeClass::Tracenorm { file, out } => decompose::trace_norm_file(&file, &out),
            DecomposeClass::Triangular { k, out } => decompose::triangular(k, &out),
            DecomposeClass::Permutation { pi, out } => decompose::permutation(&pi, &out),
            DecomposeClass::Hadamard { n, out } => decompose::hadamard(n, &out),
        },
        Command::Lowerbound { problem } => match problem {
            LowerBoundProblem::Maxcut { n, horizon, seeds } => {
                lowerbound::maxcut(n, horizon, &lowerbound::parse_seeds(&seeds)?)
            }
            LowerBoundProblem::Cf { m, n, tau0, g, horizon, seeds } => {
                lowerbound::cf(m, n, tau0, g, horizon, &lowerbound::parse_seeds(&seeds)?)
            }
        },
        Command::Verify { suite } => verify::cmd_verify(suite),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
