//! `cubulate`: command-line front end over cubulate-core.
//!
//! Exit codes: 0 success, 1 domain error, 2 I/O or parse error.

mod commands;
mod formats;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cubulate_core::Error;

use commands::ApplyArgs;

pub enum Failure {
    /// Unreadable or malformed input.
    Input(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

#[derive(Parser)]
#[command(name = "cubulate", version, about = "Median graphs, pocset duality and hyperplane bending")]
struct Cli {
    /// Worker threads; output does not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Check this many random triples for the median property instead of all.
    #[arg(long, global = true)]
    sample: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a complex file and print its invariants.
    Validate { file: PathBuf },
    /// The dual cube complex of a pocset or wallspace.
    Dual {
        #[arg(long)]
        pocset: Option<PathBuf>,
        #[arg(long)]
        walls: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The cubical subdivision.
    Subdivide {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Vertex embedding and two-to-one hyperplane map.
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Collapse strongly parallel hyperplanes.
    Compress {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Class of each compressed hyperplane.
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// The de Rham product decomposition.
    Derham {
        file: PathBuf,
        /// Directory for the factor files.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// The restriction quotient keeping the listed hyperplanes.
    Quotient {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        keep: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Repeatedly collapse hyperplanes with an r-shallow halfspace.
    Trim {
        file: PathBuf,
        #[arg(long)]
        radius: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Search for a halfspace in the corner of two halfspaces, given as `-u|v` or `+u|v`.
    Corner {
        file: PathBuf,
        #[arg(allow_hyphen_values = true)]
        first: String,
        #[arg(allow_hyphen_values = true)]
        second: String,
    },
    /// Switch systems and crooked hyperplanes.
    #[command(subcommand)]
    Bend(BendCommand),
    /// Write a built-in complex: path N, square, hypercube D, grid C R, ladder L,
    /// star K, spider LEGS LEN, square-pendant, random SEED STEPS.
    Corpus {
        kind: String,
        params: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum BendCommand {
    Graph {
        file: PathBuf,
    },
    Enumerate {
        file: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        limit: usize,
    },
    Apply {
        file: PathBuf,
        #[arg(long)]
        crooked: usize,
        #[arg(long)]
        keep_original_walls: bool,
        #[arg(long, default_value_t = 10_000)]
        limit: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Where to write the realization report (standard error otherwise).
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
            .map_err(|e| Failure::Input(format!("thread pool: {e}")))?;
    }
    let sample = cli.sample;
    match &cli.command {
        Command::Validate { file } => commands::validate(file, sample),
        Command::Dual { pocset, walls, out } => {
            commands::dual_command(pocset.as_deref(), walls.as_deref(), out.as_deref())
        }
        Command::Subdivide { file, out, map } => {
            commands::subdivide_command(file, sample, out.as_deref(), map.as_deref())
        }
        Command::Compress { file, out, map } => {
            commands::compress_command(file, sample, out.as_deref(), map.as_deref())
        }
        Command::Derham { file, out_dir } => commands::derham_command(file, sample, out_dir.as_deref()),
        Command::Quotient { file, keep, out, map } => {
            commands::quotient_command(file, sample, keep, out.as_deref(), map.as_deref())
        }
        Command::Trim { file, radius, out, map } => {
            commands::trim_command(file, sample, *radius, out.as_deref(), map.as_deref())
        }
        Command::Corner { file, first, second } => commands::corner_command(file, sample, first, second),
        Command::Bend(BendCommand::Graph { file }) => commands::bend_graph(file, sample),
        Command::Bend(BendCommand::Enumerate { file, limit }) => commands::bend_enumerate(file, sample, *limit),
        Command::Bend(BendCommand::Apply { file, crooked, keep_original_walls, limit, out, report }) => {
            commands::bend_apply(ApplyArgs {
                file,
                sample,
                crooked: *crooked,
                limit: *limit,
                keep_original_walls: *keep_original_walls,
                out: out.as_deref(),
                report: report.as_deref(),
            })
        }
        Command::Corpus { kind, params, out } => commands::corpus_command(kind, params, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: Input: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {}: {e}", e.kind());
            ExitCode::from(1)
        }
    }
}
