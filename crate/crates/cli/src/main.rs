use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::Parser;
use wonderful_cli::config::{AutAction, Cli, Command};
use wonderful_cli::{run, CliError, RunConfig};

fn execute() -> Result<i32, CliError> {
    let config = RunConfig::from_cli(Cli::parse())?;
    if config.workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    let mut stdin = String::new();
    if matches!(
        config.command,
        Command::Aut {
            action: AutAction::Realize
        }
    ) {
        io::stdin().read_to_string(&mut stdin)?;
    }
    let output = run(&config, &stdin)?;
    match &config.out {
        Some(path) => std::fs::write(path, output.text())?,
        None => io::stdout().write_all(output.text().as_bytes())?,
    }
    Ok(output.exit_code())
}

fn main() -> ExitCode {
    match execute() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("wonderful: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
