mod commands;
mod io;
mod script;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "hyperfoam", version, about = "F4-lattice spin-network simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Assemble a network and write its export and a manifest.
    Build(Common),
    /// Print the 48-row leaf holonomy table.
    Table {
        #[arg(long, value_enum, default_value = "csv")]
        format: TableFormat,
    },
    /// Run a move script or random moves and log the history.
    Evolve(EvolveArgs),
    /// Write sphere-growth, deflection and anisotropy measurements.
    Measure(MeasureArgs),
    /// Decode electric and colour charge of 8-coordinate roots.
    Decode(DecodeArgs),
    /// Export the network as DOT or JSON.
    Export(ExportArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    F4,
    #[value(name = "d4-toy")]
    D4Toy,
    #[value(name = "2d-toy")]
    Toy2d,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Md,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Json,
    Dot,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Torus parameter: side 2n, 2n⁴ supernodes.
    #[arg(long, default_value_t = 3)]
    pub n: u32,
    #[arg(long, value_enum, default_value = "f4")]
    pub mode: Mode,
    /// Side of the 2D toy torus.
    #[arg(long, default_value_t = 6)]
    pub m: usize,
    /// Seed for randomized harnesses only.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Allow n < 3, where opposite directions share super-link endpoints.
    #[arg(long)]
    pub multigraph: bool,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub common: Common,
    /// JSON array or JSON-lines file of steps.
    #[arg(long)]
    pub script: Option<PathBuf>,
    /// Append this many random legal moves, drawn from --seed.
    #[arg(long, default_value_t = 0)]
    pub random_moves: usize,
    /// Report illegal steps and continue instead of aborting.
    #[arg(long)]
    pub skip_illegal: bool,
    /// Replay a history file written by an earlier run.
    #[arg(long, conflicts_with_all = ["script", "random_moves"])]
    pub replay: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct MeasureArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub sphere: bool,
    /// Largest radius for --sphere; defaults to n/2 (at least 2).
    #[arg(long)]
    pub rmax: Option<usize>,
    #[arg(long)]
    pub deflection: bool,
    /// Toy sites whose bits are flipped for --deflection.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub defects: Vec<usize>,
    #[arg(long)]
    pub anisotropy: bool,
    /// Steps applied before measuring anisotropy.
    #[arg(long)]
    pub script: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DecodeArgs {
    /// JSON file: a list of roots, or objects with a `root` field.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Root coordinates, eight per root.
    #[arg(last = true, allow_negative_numbers = true)]
    pub coords: Vec<i64>,
}

#[derive(Args, Debug)]
pub struct ExportArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value = "json")]
    pub format: ExportFormat,
    /// Shorthand for --format dot.
    #[arg(long)]
    pub dot: bool,
}

fn init_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("HYPERFOAM_THREADS") {
        let n: usize = v.parse().map_err(|_| anyhow::anyhow!("HYPERFOAM_THREADS must be a positive integer, got {v:?}"))?;
        anyhow::ensure!(n > 0, "HYPERFOAM_THREADS must be positive");
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    init_threads()?;
    match cli.command {
        Command::Build(c) => commands::build(&c),
        Command::Table { format } => commands::table(format),
        Command::Evolve(a) => commands::evolve(&a),
        Command::Measure(a) => commands::measure(&a),
        Command::Decode(a) => commands::decode(&a),
        Command::Export(a) => commands::export(&a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
