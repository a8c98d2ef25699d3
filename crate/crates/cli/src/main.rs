//! `vosground` command-line tool.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error.

use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;

use commands::UsageError;

#[derive(Debug, Parser)]
#[command(
    name = "vosground",
    version,
    about = "Temporal re-ranking, evaluation and simulation for language-guided video object segmentation"
)]
struct Cli {
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Re-rank proposals and select one box per frame.
    Rerank(commands::rerank::Args),
    /// Evaluate box tracks or mask sequences against ground truth.
    Eval(commands::eval::Args),
    /// Generate synthetic scenes, ground truth and corrupted proposals.
    Simulate(commands::simulate::Args),
    /// Randomly perturb boxes.
    Jitter(commands::jitter::Args),
    /// Referring-expression statistics and attribute tags.
    Stats(commands::stats::Args),
    /// Oracle grounding or oracle box-proposal tracks.
    Oracle(commands::oracle::Args),
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.jobs {
        pool = pool.num_threads(j as usize);
    }
    let pool = pool.build()?;
    pool.install(|| match cli.command {
        Command::Rerank(a) => commands::rerank::run(a),
        Command::Eval(a) => commands::eval::run(a),
        Command::Simulate(a) => commands::simulate::run(a),
        Command::Jitter(a) => commands::jitter::run(a),
        Command::Stats(a) => commands::stats::run(a),
        Command::Oracle(a) => commands::oracle::run(a),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
