use std::path::PathBuf;
use std::process::ExitCode;

use casimir_cli::{parse_config, run, CliError, Command, Format, RunOptions};
use clap::{Args, Parser, Subcommand};
use log::warn;

#[derive(Parser)]
#[command(
    name = "casimir",
    version,
    about = "Casimir pressure and disorder fluctuations between a bulk plate and a 2d sheet"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Pressure at the fixed conditions, as JSON by default.
    Pressure(Common),
    /// Pressure over the configured sweep grid.
    Sweep(Common),
    /// Normalized DC conductivity of plate 2 over the sweep grid.
    Conductivity(Common),
    /// Fluctuation reports, scaling fits and energy distributions.
    Fluctuations(Common),
}

#[derive(Args)]
struct Common {
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Threads for grid points; all cores when omitted.
    #[arg(long)]
    workers: Option<usize>,
    /// Reject unknown configuration keys instead of warning.
    #[arg(long)]
    strict: bool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (command, common) = match cli.command {
        Cmd::Pressure(c) => (Command::Pressure, c),
        Cmd::Sweep(c) => (Command::Sweep, c),
        Cmd::Conductivity(c) => (Command::Conductivity, c),
        Cmd::Fluctuations(c) => (Command::Fluctuations, c),
    };
    match execute(command, &common) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("casimir {}: {e}", command.as_str());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(command: Command, common: &Common) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&common.config).map_err(|source| CliError::Io {
        path: common.config.display().to_string(),
        source,
    })?;
    let (config, unknown) = parse_config(&text, common.strict)?;
    for u in unknown {
        warn!("{}: {u} (ignored)", common.config.display());
    }
    let options = RunOptions {
        out: common.out.clone(),
        format: common.format,
        workers: common.workers,
    };
    run(command, &config, &options)
}
