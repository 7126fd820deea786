//! `radial-embed` command-line interface.

mod commands;
mod config;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{CommonArgs, FamilyArgs, FamilyName, RunArgs};

#[derive(Debug, Parser)]
#[command(
    name = "radial-embed",
    version,
    about = "Force-directed graph embedding with radial centrality scores"
)]
struct Cli {
    /// Increase log verbosity (-v info, -vv debug); RUST_LOG takes precedence
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a generated graph as a SNAP-style edge list
    Generate(GenerateArgs),
    /// Embed a graph and write positions.csv with radial scores
    Embed(RunArgs),
    /// Correlate radial scores with six centrality measures (centrality.csv, centrality.json)
    BenchCentrality(RunArgs),
    /// Compare greedy and embedding-based seed selection for influence maximization (influence.json)
    BenchInfluence(RunArgs),
    /// Write initial and final layouts plus normalized degrees for plotting
    DumpLayout(RunArgs),
}

#[derive(Debug, clap::Args)]
struct GenerateArgs {
    #[arg(value_enum)]
    family: FamilyName,
    #[command(flatten)]
    params: FamilyArgs,
    #[command(flatten)]
    common: CommonArgs,
    /// Output file; standard output when omitted
    #[arg(long, value_name = "PATH")]
    out: Option<std::path::PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(radial_embed::Error),
}

impl From<radial_embed::Error> for CliError {
    fn from(e: radial_embed::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Core(e.into())
    }
}

impl CliError {
    /// 1 usage, 2 data, 3 numerical.
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Core(e) if matches!(e.root(), radial_embed::Error::InvalidParameter(_)) => 1,
            CliError::Core(e) if e.is_numerical() => 3,
            CliError::Core(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

fn init_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("RADIAL_EMBED_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| {
            CliError::Usage(format!(
                "RADIAL_EMBED_THREADS must be a positive integer, got {value:?}"
            ))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    init_threads()?;
    match cli.command {
        Command::Generate(a) => {
            commands::generate(a.family, &a.params, &a.common, a.out.as_deref())
        }
        Command::Embed(a) => commands::embed(&a),
        Command::BenchCentrality(a) => commands::bench_centrality(&a),
        Command::BenchInfluence(a) => commands::bench_influence(&a),
        Command::DumpLayout(a) => commands::dump_layout(&a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("radial-embed: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
