mod args;
mod commands;
mod config;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

use crate::args::{Cli, Command};
use crate::config::RunConfig;
use crate::error::CliError;

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::ScanChi(args) => commands::scan_chi(&RunConfig::resolve("scan-chi", &args)?),
        Command::ScanBeta(args) => {
            if !args.chi.is_finite() {
                return Err(CliError::Validation(format!("--chi must be finite, got {}", args.chi)));
            }
            let mut config = RunConfig::resolve("scan-beta", &args.common)?;
            config.chi = Some(args.chi);
            config.port = Some(args.port);
            commands::scan_beta(&config, &args)
        }
        Command::Verify(args) => commands::verify(&RunConfig::resolve("verify", &args)?),
        Command::Calibrate(args) => commands::calibrate(&RunConfig::resolve("calibrate", &args)?),
    }
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
            eprintln!("ozawa-lab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
