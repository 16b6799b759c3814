//! `herzslice` command-line interface.
//!
//! Exit status: 0 on success, 1 when `verify` finds a failing check, 2 for
//! usage, configuration and input errors.

mod commands;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use herzslice::{Exponent, Variant};

#[derive(Parser)]
#[command(name = "herzslice", version, about = "Slice and Herz-slice norms, block decompositions and the Hardy-Littlewood maximal operator on grids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a seeded corpus of function specs as corpus_<seed>_<index>.json.
    Gen(GenArgs),
    /// Compute a norm of a sampled function spec.
    Norm(NormArgs),
    /// Decompose a function into central blocks.
    Decompose(DecomposeArgs),
    /// Evaluate the maximal function and write it as CSV.
    Maximal(MaximalArgs),
    /// Run a parameter sweep of the maximal-operator constant.
    Sweep(SweepArgs),
    /// Run the executable property checks.
    Verify(VerifyArgs),
    /// Time the main kernels over a range of grid sizes.
    Bench(BenchArgs),
}

#[derive(Args, Clone, Debug)]
pub struct ParamArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Outer exponent; accepts "inf".
    #[arg(long, default_value = "2")]
    pub p: Exponent,
    /// Slice exponent; accepts "inf".
    #[arg(long, default_value = "2")]
    pub q: Exponent,
    /// Local exponent, in (1, inf).
    #[arg(long, default_value_t = 2.0)]
    pub r: f64,
    /// Ball radius of the local averages.
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    #[arg(long, default_value = "homo", value_parser = parse_variant)]
    pub variant: Variant,
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse().map_err(|e: herzslice::Error| e.to_string())
}

#[derive(Args, Debug)]
pub struct GenArgs {
    /// Corpus config as JSON: {"seed", "size", "grid", "mix"}. Overrides the
    /// individual flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10)]
    pub size: usize,
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    /// Half-width L of the grid box.
    #[arg(long, default_value_t = 8.0)]
    pub half_width: f64,
    /// Cell size h.
    #[arg(long, default_value_t = 0.0625)]
    pub spacing: f64,
    /// Distance kept between every support and the box boundary.
    #[arg(long, default_value_t = 1.0)]
    pub margin: f64,
    /// Weights such as "ball_indicator=1,gaussian=2"; unnamed kinds get 0.
    #[arg(long)]
    pub mix: Option<String>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Space {
    /// Lebesgue L^p (uses --p).
    Lp,
    /// Slice space (E_r^q)_t.
    Slice,
    /// Herz-slice space.
    Herz,
    /// Classical Herz space (uses --alpha, --p, --q).
    Classical,
    /// Power-weighted L^p with weight |x|^(alpha p).
    Weighted,
}

#[derive(Args, Debug)]
pub struct NormArgs {
    /// Function spec document (JSON with "grid" and "terms").
    pub spec: PathBuf,
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, value_enum, default_value_t = Space::Herz)]
    pub space: Space,
    /// Weak variant of the norm.
    #[arg(long)]
    pub weak: bool,
}

#[derive(Args, Debug)]
pub struct DecomposeArgs {
    pub spec: PathBuf,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Directory for per-block CSV dumps.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct MaximalArgs {
    pub spec: PathBuf,
    #[arg(long, default_value_t = 2.0)]
    pub extension_factor: f64,
    /// Extra padding of the evaluation grid.
    #[arg(long, default_value_t = 0.0)]
    pub t: f64,
    /// Use the reference evaluator (small grids only).
    #[arg(long)]
    pub oracle: bool,
    /// Output CSV path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Sweep config JSON.
    pub config: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Grid,
    Lebesgue,
    Slice,
    Herz,
    Blocks,
    Maximal,
    Duality,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Print the outcome as JSON instead of one line per check.
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Cells per axis.
    #[arg(long, value_delimiter = ',', default_value = "1024,4096,16384")]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    /// Timed runs per kernel; the median is reported.
    #[arg(long, default_value_t = 5)]
    pub repeats: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => commands::gen(&a).map(|_| ExitCode::SUCCESS),
        Command::Norm(a) => commands::norm(&a).map(|_| ExitCode::SUCCESS),
        Command::Decompose(a) => commands::decompose(&a).map(|_| ExitCode::SUCCESS),
        Command::Maximal(a) => commands::maximal(&a).map(|_| ExitCode::SUCCESS),
        Command::Sweep(a) => commands::sweep(&a).map(|_| ExitCode::SUCCESS),
        Command::Bench(a) => commands::bench(&a).map(|_| ExitCode::SUCCESS),
        Command::Verify(a) => verify::run(&a).map(|ok| if ok { ExitCode::SUCCESS } else { ExitCode::from(1) }),
    };
    match result {
        Ok(code) => code,
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain()
        .filter_map(|c| c.downcast_ref::<std::io::Error>())
        .any(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
}
