use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

mod commands;
mod spec;

use spec::{Command, Overrides};

/// Outage analysis of power allocation and decoding order selection in
/// two-user downlink NOMA. Writes CSV.
#[derive(Debug, Parser)]
#[command(name = "noma", version)]
struct Cli {
    #[command(subcommand)]
    command: CommandArg,

    #[command(flatten)]
    overrides: Overrides,

    /// TOML file with default settings; flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output file; standard output when omitted
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum CommandArg {
    /// Classify a triangular grid of SINR thresholds into regions
    Regions,
    /// System outage against SNR, simulated and in closed form
    Sweep,
    /// Per-user outage against SNR, with the exhaustive-search envelope
    UserOutage,
    /// Coding gain over the channel-state baseline on a threshold or distance grid
    Gain,
}

impl From<CommandArg> for Command {
    fn from(c: CommandArg) -> Self {
        match c {
            CommandArg::Regions => Command::Regions,
            CommandArg::Sweep => Command::Sweep,
            CommandArg::UserOutage => Command::UserOutage,
            CommandArg::Gain => Command::Gain,
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let spec = spec::resolve(cli.command.into(), cli.config.as_deref(), &cli.overrides)?;
    let (spec, relabeled) = spec.normalize()?;
    let csv = match spec.command {
        Command::Regions => commands::run_regions(&spec)?,
        Command::Sweep => commands::run_sweep(&spec, relabeled)?,
        Command::UserOutage => commands::run_user_outage(&spec, relabeled)?,
        Command::Gain => commands::run_gain(&spec, relabeled)?,
    };
    match &cli.out {
        Some(path) => {
            fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?
        }
        None => io::stdout()
            .lock()
            .write_all(csv.as_bytes())
            .context("writing to stdout")?,
    }
    if relabeled {
        eprintln!("note: users relabeled so that user 1 has the higher rate");
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
