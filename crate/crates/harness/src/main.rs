use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mstar_core::sequences::builtin_catalog;
use mstar_harness::{run, ExperimentConfig, RunError, SuiteKind, DEMO_CONFIG};

/// Experiments with the bounded-consistency belief estimators.
#[derive(Parser)]
#[command(name = "mstar", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a trend suite from a TOML config.
    Run {
        config: PathBuf,
        /// Output directory, overriding `suite.output_dir`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare M* trajectories with the truncated-limit sampler.
    Crosscheck {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the built-in sequence catalog.
    ListSequences,
    /// Run the small built-in demo suite.
    Demo {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn execute(cfg: ExperimentConfig, expect: Option<SuiteKind>, out: Option<PathBuf>) -> Result<bool, RunError> {
    if let Some(kind) = expect {
        if cfg.suite.kind != kind {
            let cmd = if kind == SuiteKind::Trend { "run" } else { "crosscheck" };
            return Err(RunError::Usage(format!("suite `{}` has the wrong kind for `{cmd}`", cfg.suite.id)));
        }
    }
    let out = out.unwrap_or_else(|| cfg.suite.output_dir.clone());
    let report = run(&cfg, &out, &mut |msg| eprintln!("{msg}"))?;
    for line in report.lines() {
        println!("{line}");
    }
    println!("{} {} ({})", if report.passed { "PASS" } else { "FAIL" }, report.suite, out.display());
    Ok(report.passed)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::ListSequences => {
            for seq in builtin_catalog() {
                println!("{}\t{}", seq.id, seq.description);
            }
            return ExitCode::SUCCESS;
        }
        Command::Run { config, out } => {
            ExperimentConfig::load(&config).map_err(RunError::from).and_then(|c| execute(c, Some(SuiteKind::Trend), out))
        }
        Command::Crosscheck { config, out } => {
            ExperimentConfig::load(&config).map_err(RunError::from).and_then(|c| execute(c, Some(SuiteKind::Crosscheck), out))
        }
        Command::Demo { out } => ExperimentConfig::parse(DEMO_CONFIG).map_err(RunError::from).and_then(|c| execute(c, None, out)),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
