use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use gptlab::deciders::EffectMode;
use gptlab_cli::{CliError, Limits, Report, DEFAULT_MAX_VERTICES};

#[derive(Parser)]
#[command(name = "gptlab", version, about = "Exact checks for general probabilistic theories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone, Copy)]
struct LimitArgs {
    /// Largest product graph to build.
    #[arg(long, env = "GPTLAB_MAX_VERTICES", default_value_t = DEFAULT_MAX_VERTICES)]
    max_vertices: usize,
    /// Allow levels above 3.
    #[arg(long)]
    allow_high_level: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    NoRestriction,
    Generated,
}

#[derive(Subcommand)]
enum Command {
    /// Local Orthogonality at levels 1..=k of a behavior file.
    CheckLo {
        behavior: PathBuf,
        #[arg(long, short, default_value_t = 1)]
        level: usize,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Consistent Exclusivity at levels 1..=k of a weight on a hypergraph.
    CheckCe {
        hypergraph: PathBuf,
        weights: PathBuf,
        #[arg(long, short, default_value_t = 1)]
        level: usize,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Sufficient Orthogonality for effect generators of a system, by index.
    CheckSo {
        system: PathBuf,
        #[arg(required = true)]
        indices: Vec<usize>,
        #[arg(long, value_enum, default_value = "no-restriction")]
        mode: Mode,
    },
    /// No-Signalling of a behavior file.
    CheckNs { behavior: PathBuf },
    /// Write a built-in model: classical N, squarebit, polygon N, prbox,
    /// tsirelson, pentagon.
    Zoo {
        name: String,
        parameter: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Where the pentagon writes its weight file.
        #[arg(long)]
        weights: Option<PathBuf>,
    },
    /// Parse and validate a system, behavior, hypergraph or weight file.
    Validate {
        file: PathBuf,
        /// Hypergraph the weight file lives on.
        #[arg(long)]
        hypergraph: Option<PathBuf>,
    },
}

fn limits(a: LimitArgs) -> Limits {
    Limits { max_vertices: a.max_vertices, allow_high_level: a.allow_high_level }
}

fn run(cli: Cli) -> Result<Report, CliError> {
    match cli.command {
        Command::CheckLo { behavior, level, limits: l } => gptlab_cli::check_lo(&behavior, level, limits(l)),
        Command::CheckCe { hypergraph, weights, level, limits: l } => {
            gptlab_cli::check_ce(&hypergraph, &weights, level, limits(l))
        }
        Command::CheckSo { system, indices, mode } => {
            let mode = match mode {
                Mode::NoRestriction => EffectMode::NoRestriction,
                Mode::Generated => EffectMode::Generated,
            };
            gptlab_cli::check_so(&system, &indices, mode)
        }
        Command::CheckNs { behavior } => gptlab_cli::check_ns(&behavior),
        Command::Zoo { name, parameter, out, weights } => {
            gptlab_cli::zoo(&name, parameter, out.as_deref(), weights.as_deref())
        }
        Command::Validate { file, hypergraph } => gptlab_cli::validate(&file, hypergraph.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(report) => {
            print!("{}", report.render());
            ExitCode::from(report.outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
