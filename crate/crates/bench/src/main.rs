use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use atomsel_bench::{
    emit_plot_data, emit_report, emit_timing, measure_running_time, run_sweep, ExperimentConfig, ExperimentReport,
    Measure, ReportFormat,
};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "atomsel", version, about = "Sparse-recovery benchmark sweeps and timing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an α/SMNR sweep and write the report.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "csv")]
        format: ReportFormat,
        /// Worker threads (default: all cores). Output does not depend on it.
        #[arg(long)]
        workers: Option<usize>,
        /// Overrides `master_seed` from the config.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Measure running time per recovery at M = ceil(K log N).
    Time {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        reps: usize,
    },
    /// Extract plot-ready columns from a json report.
    PlotData {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        measure: String,
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Sweep { config, out, format, workers, seed } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Some(seed) = seed {
                cfg.master_seed = seed;
            }
            let report = run_sweep(&cfg, workers).context("sweep failed")?;
            emit_report(&report, format, &out)?;
            let failures: u64 = report.cells.iter().map(|c| c.failures).sum();
            if failures > 0 {
                eprintln!("warning: {failures} algorithm runs failed and were excluded; see the report");
            }
        }
        Command::Time { config, out, reps } => {
            let cfg = ExperimentConfig::load(&config)?;
            emit_timing(&measure_running_time(&cfg, reps)?, &out)?;
        }
        Command::PlotData { input, measure, out } => {
            let measure: Measure = measure.parse()?;
            emit_plot_data(&ExperimentReport::load(&input)?, measure, &out)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let text = e.render().to_string();
            eprintln!("{}", text.lines().next().unwrap_or("invalid arguments"));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
