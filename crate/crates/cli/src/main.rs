//! `leiden-bench`: runs community-detection experiments over static graphs
//! with random batch updates (`sweep`) or over temporal edge streams
//! (`temporal`), comparing a from-scratch run against the incremental
//! variants, and writes machine-readable reports.

mod report;
mod run;

use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use report::{append_mean_rows, emit, Format};
use run::{run_sweep, run_temporal, SweepArgs, TemporalArgs};

#[derive(Parser)]
#[command(
    name = "leiden-bench",
    version,
    about = "Benchmarks for static and incremental Leiden community detection"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args)]
struct OutputOpts {
    /// Report destination; stdout when omitted
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Report format
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep random batch updates over a static graph
    Sweep(SweepArgs),
    /// Replay a temporal edge stream in consecutive insertion batches
    Temporal(TemporalArgs),
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let mut rows = match &cli.command {
        Command::Sweep(args) => run_sweep(args)?,
        Command::Temporal(args) => run_temporal(args)?,
    };
    append_mean_rows(&mut rows);
    emit(&rows, cli.output.format, cli.output.output.as_deref())?;
    Ok(())
}
