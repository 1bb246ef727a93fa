//! `starwire` — star-network scattering runs from presets or config files.

mod config;
mod csvout;
mod manifest;
mod presets;
mod runner;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use crate::runner::{CliError, RunOptions};

/// Solve star-network scattering problems and emit CSV tables, optional SVG
/// plots, and a run manifest.
#[derive(Debug, Parser)]
#[command(name = "starwire", version, about)]
struct Cli {
    /// Built-in figure preset to run (fig2 | fig3 | fig4 | fig5).
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,

    /// Config file describing a custom run (see the shipped configs/ for
    /// the schema).
    #[arg(long)]
    config: Option<PathBuf>,

    /// Output directory; created if missing.
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,

    /// Also render one SVG line chart per CSV.
    #[arg(long, default_value = "off", value_parser = ["on", "off"])]
    svg: String,

    /// Phase-time computation route.
    #[arg(long, default_value = "analytic", value_parser = ["analytic", "fd"])]
    method: String,

    /// Worker threads for sweep evaluation (output is identical for any
    /// value).
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let options = RunOptions {
        out_dir: cli.out_dir,
        svg: cli.svg == "on",
        method: if cli.method == "fd" {
            starwire::TauMethod::FiniteDifference
        } else {
            starwire::TauMethod::Analytic
        },
        jobs: cli.jobs.max(1),
    };

    let outcome = match (cli.preset, cli.config) {
        (Some(name), None) => runner::run_preset(&name, &options),
        (None, Some(path)) => runner::run_config_file(&path, &options),
        (None, None) => Err(CliError::Config(
            "nothing to do: pass --preset NAME or --config PATH".into(),
        )),
        (Some(_), Some(_)) => unreachable!("clap enforces the conflict"),
    };

    match outcome {
        Ok(summary) => {
            for line in summary.lines {
                println!("{line}");
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
