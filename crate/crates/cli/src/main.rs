//! `nudhy`: sample null models of directed hypergraphs and compare the
//! observed hypergraph against the samples.

mod commands;
mod run;

use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use nudhy::exec::{self, Execution};

use commands::{affinity, contagion, convert, econ, metric, sample};

#[derive(Debug, Parser)]
#[command(name = "nudhy", version, about = "Null models for directed hypergraphs")]
struct Cli {
    /// Worker threads; 0 uses every logical core. `NUDHY_THREADS` takes
    /// precedence.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Run all work on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    /// Add wall-clock timings to the manifest (makes it non-reproducible).
    #[arg(long, global = true)]
    record_timings: bool,
    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Convert between hypergraph formats.
    Convert(convert::ConvertArgs),
    /// Draw samples from a null model.
    Sample(sample::SampleArgs),
    /// ARSD convergence trace of a chain.
    Converge(sample::ConvergeArgs),
    /// Structural metrics of an observed hypergraph and its samples.
    Metric(metric::MetricArgs),
    /// Group affinity of labelled nodes.
    Affinity(affinity::AffinityArgs),
    /// Economic complexity on trade hypergraphs.
    Econ(econ::EconArgs),
    /// Stationary density of nonlinear SIS contagion.
    Contagion(contagion::ContagionArgs),
}

pub struct Ctx {
    pub execution: Execution,
    pub record_timings: bool,
}

fn threads(cli: &Cli) -> Result<usize> {
    match std::env::var("NUDHY_THREADS") {
        Ok(v) => v.trim().parse().with_context(|| format!("NUDHY_THREADS must be an integer, got '{v}'")),
        Err(_) => Ok(cli.threads),
    }
}

fn main_inner(cli: Cli) -> Result<()> {
    exec::configure_threads(threads(&cli)?)?;
    let ctx = Ctx {
        execution: if cli.sequential { Execution::Sequential } else { Execution::Parallel },
        record_timings: cli.record_timings,
    };
    log::debug!("{} worker threads", exec::current_threads());
    match &cli.command {
        Command::Convert(a) => convert::run(&ctx, a),
        Command::Sample(a) => sample::run(&ctx, a),
        Command::Converge(a) => sample::converge(&ctx, a),
        Command::Metric(a) => metric::run(&ctx, a),
        Command::Affinity(a) => affinity::run(&ctx, a),
        Command::Econ(a) => econ::run(&ctx, a),
        Command::Contagion(a) => contagion::run(&ctx, a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match main_inner(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
