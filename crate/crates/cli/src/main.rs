//! `agreeable`: tally committee elections with list ballots, print the
//! guaranteed approval floors, and run the verification sweeps.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "agreeable",
    version,
    about = "Exact committee-election tallies and agreeability bounds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Election parameters as n,k,j.
    #[arg(long, global = true, value_name = "N,K,J")]
    pub params: Option<String>,
    /// Center list of the ball, e.g. 1,2,3.
    #[arg(long, global = true, value_name = "LIST")]
    pub center: Option<String>,
    /// Ball radius (or ring index for `generate --mode uniform-ring`).
    #[arg(long, global = true)]
    pub radius: Option<u32>,
    /// Threshold approval: a voter approves when at least S of the list is elected.
    #[arg(long, global = true)]
    pub threshold: Option<u32>,
    /// Fraction of voters inside the ball, as p/q.
    #[arg(long, global = true)]
    pub alpha: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Ballot file to read.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// File to write instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Complete short lists inside the ball before tallying.
    #[arg(long, global = true)]
    pub complete: bool,
    /// Annotate fractions with a decimal approximation.
    #[arg(long, global = true)]
    pub decimal: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Structured,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenerateMode {
    UniformAll,
    UniformBall,
    UniformRing,
    Concentric,
    RandomBall,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Find the most popular committees of a ballot file.
    Tally {
        /// Exit 1 if the tally falls below any reported floor.
        #[arg(long)]
        check_bounds: bool,
    },
    /// Print the guaranteed approval floors for given parameters.
    Bounds,
    /// Run the lemma validators and randomized cross-checks.
    Verify {
        /// Largest pool size for the exhaustive sweeps.
        #[arg(long, default_value_t = 10)]
        max_n: u32,
        /// Random instances per randomized suite.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Print only failing checks and per-suite totals.
        #[arg(long)]
        summary: bool,
        #[arg(long, hide = true, value_name = "R,M")]
        corrupt_b: Option<String>,
    },
    /// Write a ballot file from a named family of distributions.
    Generate {
        #[arg(long, value_enum)]
        mode: GenerateMode,
        /// Ring weights w_0,w_1,... for `concentric` (fractions allowed).
        #[arg(long)]
        weights: Option<String>,
        /// Number of voters for `random-ball`.
        #[arg(long, default_value_t = 500)]
        voters: u64,
    },
    /// Exact minimax over concentric distributions on a ball.
    WorstCase,
    /// Reference brute-force computations.
    #[command(hide = true)]
    Oracle {
        /// Grid denominator for the minimax grid search.
        #[arg(long)]
        grid: Option<u32>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = commands::run(&cli);
    ExitCode::from(outcome)
}
