use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use maxplus_lln::exponents::{DEFAULT_STEPS, DEFAULT_TRIALS};
use maxplus_lln::structure::{DEFAULT_EPSILON_GAMMA, DEFAULT_SEMIGROUP_CAP};
use maxplus_lln::verdict::DEFAULT_CLUSTER_RADIUS;

/// Cycle-time analysis and simulation for random max-plus recursions.
///
/// MODEL arguments accept a path to a model document or the name of a
/// bundled model: example1, example2, example2-modified, figure1.
#[derive(Debug, Parser)]
#[command(name = "maxplus-lln", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    /// Only for `simulate`.
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Support graph, components, exponents and the cycle-time verdict.
    /// Exits 0 if x(n,0)/n converges, 2 if not, 3 on an unresolved near-tie.
    Analyze(AnalyzeArgs),
    /// Scaled coordinate x_i(n,0)/n or y_i(n,0)/n over independent trials.
    Simulate(SimulateArgs),
    /// Top and bottom Lyapunov exponents, per-component exponents and any
    /// exact values available for the law.
    EstimateGamma(EstimateArgs),
    /// Pattern semigroup closure and block-reachability certificates.
    Semigroup(SemigroupArgs),
    /// Re-run a worked scenario and report pass/fail per check.
    Reproduce(ReproduceArgs),
    /// Exact enumeration oracles for cross-checking.
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
pub struct MonteCarlo {
    /// Horizon n.
    #[arg(long, default_value_t = DEFAULT_STEPS, value_parser = at_least_one)]
    pub steps: usize,
    /// Independent trials T.
    #[arg(long, default_value_t = DEFAULT_TRIALS, value_parser = at_least_one)]
    pub trials: usize,
    /// Master seed; required whenever the run draws random matrices.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    pub model: String,
    #[command(flatten)]
    pub mc: MonteCarlo,
    /// Tolerance for treating two estimated exponents as equal.
    #[arg(long, default_value_t = DEFAULT_EPSILON_GAMMA)]
    pub epsilon_gamma: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// x(n,0) = A(n−1)⋯A(0) ⊗ 0
    Forward,
    /// y(n,0) = A(−1)⋯A(−n) ⊗ 0
    Backward,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    pub model: String,
    #[command(flatten)]
    pub mc: MonteCarlo,
    /// Node to follow, 1-based.
    #[arg(long, default_value_t = 1)]
    pub coordinate: usize,
    #[arg(long, value_enum, default_value_t = Mode::Backward)]
    pub mode: Mode,
    /// Clustering radius for the histogram.
    #[arg(long, default_value_t = DEFAULT_CLUSTER_RADIUS)]
    pub radius: f64,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    pub model: String,
    #[command(flatten)]
    pub mc: MonteCarlo,
}

#[derive(Debug, Args)]
pub struct SemigroupArgs {
    pub model: String,
    /// Give up once the closure exceeds this many elements.
    #[arg(long, default_value_t = DEFAULT_SEMIGROUP_CAP)]
    pub cap: usize,
    /// Row set I for a reachability certificate, 1-based (e.g. 1,2).
    #[arg(long, value_delimiter = ',', requires = "to")]
    pub from: Vec<usize>,
    /// Column set J for a reachability certificate, 1-based.
    #[arg(long, value_delimiter = ',', requires = "from")]
    pub to: Vec<usize>,
    /// List every element of the closure.
    #[arg(long)]
    pub elements: bool,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    #[command(subcommand)]
    pub scenario: Scenario,
}

#[derive(Debug, Subcommand)]
pub enum Scenario {
    /// The four-state mixing chain whose limit is random.
    Example1 {
        #[arg(long, default_value_t = 0.3)]
        gamma1: f64,
        #[arg(long, default_value_t = 0.2)]
        gamma2: f64,
        #[arg(long, default_value_t = 10_000, value_parser = at_least_one)]
        steps: usize,
        #[arg(long, default_value_t = 2_000, value_parser = at_least_one)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// The i.i.d. switching pair without a cycle time.
    Example2 {
        /// Probability of atom B.
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        /// Horizon of the trajectory checks.
        #[arg(long, default_value_t = 100_000, value_parser = at_least_one)]
        steps: usize,
        /// Trials for the exponent estimate.
        #[arg(long, default_value_t = 200, value_parser = at_least_one)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(subcommand)]
    pub kind: OracleKind,
}

#[derive(Debug, Subcommand)]
pub enum OracleKind {
    /// Maximum cycle mean of a single matrix.
    Karp {
        /// Deterministic model (path or bundled name).
        #[arg(required_unless_present = "matrix", conflicts_with = "matrix")]
        model: Option<String>,
        /// Inline matrix, e.g. '[[0,3],[1,"-inf"]]'.
        #[arg(long)]
        matrix: Option<String>,
    },
    /// Product entries of a short matrix sequence against brute-force
    /// maxima over paths.
    Paths {
        model: String,
        #[arg(long, value_parser = at_least_one)]
        steps: usize,
        /// Explicit atom labels A(0),…,A(n−1), comma separated.
        #[arg(long, value_delimiter = ',', conflicts_with = "seed")]
        sequence: Vec<String>,
        /// Draw the sequence from the law instead.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Exact law of x_i(n,0) by enumerating atom sequences.
    ExactDist {
        model: String,
        #[arg(long)]
        steps: usize,
        /// 1-based.
        #[arg(long, default_value_t = 1)]
        coordinate: usize,
    },
}

fn at_least_one(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}
