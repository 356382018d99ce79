use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use degenfb::cli::{run, Command, Invocation};

#[derive(Parser)]
#[command(name = "degenfb", version, about = "Doubly degenerate singular perturbation experiments")]
struct Args {
    #[command(subcommand)]
    command: Cmd,
    /// JSON run configuration.
    #[arg(long, global = true, default_value = "config.json")]
    config: PathBuf,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Seed for sampled centers and matrices.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve one problem and write u.csv and result.json.
    Solve,
    /// Solve along a decreasing eps list with geometry reports.
    Sweep,
    /// Select and verify barrier constants.
    Barrier,
    /// One-dimensional slope law, profile and solver cross-check.
    Oned,
    /// Measure geometry of a stored field.
    Geometry {
        /// Field CSV; defaults to u.csv in the output directory.
        #[arg(long)]
        field: Option<PathBuf>,
    },
    /// Check the configuration without solving.
    Validate,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let level = match std::env::var("DEGENFB_LOG").as_deref() {
        Ok("quiet") => "off",
        Ok("trace") => "trace",
        _ => "info",
    };
    env_logger::Builder::new().parse_filters(level).format_timestamp(None).init();
    if let Some(n) = args.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let command = match args.command {
        Cmd::Solve => Command::Solve,
        Cmd::Sweep => Command::Sweep,
        Cmd::Barrier => Command::Barrier,
        Cmd::Oned => Command::Oned,
        Cmd::Geometry { field } => Command::Geometry { field },
        Cmd::Validate => Command::Validate,
    };
    let inv = Invocation { command, config: args.config, out: args.out, seed: args.seed };
    ExitCode::from(run(&inv) as u8)
}
