use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pagraph::model::WeightMode;

#[derive(Debug, Parser)]
#[command(
    name = "pagraph",
    version,
    about = "Experiments on preferential attachment multigraphs PA(m; n)"
)]
pub struct Cli {
    /// Worker threads for trial-level parallelism (default: all cores).
    #[arg(long, global = true, env = "PAGRAPH_JOBS")]
    pub jobs: Option<usize>,

    /// Directory that relative output paths are resolved against.
    #[arg(long, global = true, env = "PAGRAPH_OUT_DIR")]
    pub out_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate one graph.
    Generate(GenerateArgs),
    /// Compare simulated degree counts with the closed form.
    Degrees(DegreesArgs),
    /// Estimate how often graphs are symmetric.
    Symmetry(SymmetryArgs),
    /// Labeled entropy: exact, Monte Carlo or asymptotic; or the structural bracket.
    Entropy(EntropyArgs),
    /// Level decompositions of the chooser DAG.
    Dag(DagArgs),
    /// Run the exhaustive oracle suites on small graphs.
    Verify(VerifyArgs),
    /// One JSON summary of all experiments at a given size.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pag,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Pag => "pag",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Vertex 1's loops weigh 2 each when sampling.
    D,
    /// Sample proportionally to reported degree.
    R,
}

impl From<Mode> for WeightMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::D => WeightMode::SelfLoopDoubled,
            Mode::R => WeightMode::ProperRenormalized,
        }
    }
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Edges added per arriving vertex.
    #[arg(short = 'm', long = "edges")]
    pub m: u32,
    /// Number of vertices.
    #[arg(short = 'n', long = "vertices")]
    pub n: u32,
    /// Sampling weight convention for vertex 1's loops.
    #[arg(long, value_enum, default_value = "d")]
    pub mode: Mode,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write the artifact here instead of standard output.
    #[arg(short = 'o', long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct DegreesArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest degree tabulated.
    #[arg(long, default_value_t = 20)]
    pub d_max: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SymmetryMethod {
    Exact,
    Certificate,
}

#[derive(Debug, Args)]
pub struct SymmetryArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "exact")]
    pub method: SymmetryMethod,
    /// Continue a per-trial file left by an interrupted run.
    #[arg(long, requires = "output")]
    pub resume: bool,
    /// Record per-trial wall-clock time (makes output non-reproducible).
    #[arg(long)]
    pub timing: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("how").required(true).args(["exact", "samples", "asymptotic", "bracket"])))]
pub struct EntropyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Enumerate every admissible graph.
    #[arg(long)]
    pub exact: bool,
    /// Monte Carlo over this many sampled graphs.
    #[arg(long)]
    pub samples: Option<usize>,
    /// The asymptotic formula.
    #[arg(long)]
    pub asymptotic: bool,
    /// Bracket the structural entropy using this many samples.
    #[arg(long, value_name = "SAMPLES")]
    pub bracket: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also report values in bits.
    #[arg(long)]
    pub bits: bool,
    /// Emit JSON (same as --format json).
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct DagArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// X counts only vertices above eps * n.
    #[arg(long, default_value_t = 0.5)]
    pub eps: f64,
    /// Minimum chain length counted by X and Y.
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    /// Continue a per-trial file left by an interrupted run.
    #[arg(long, requires = "output")]
    pub resume: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Largest vertex count enumerated.
    #[arg(long, default_value_t = 6)]
    pub max_n: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}
