//! `selberg`: length spectra, zeta values and verification suites for
//! compact hyperbolic surfaces.

mod args;
mod check_cmd;
mod config;
mod error;
mod spectrum_cmd;
mod zeta_cmd;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use config::RunConfig;
use error::{CliError, CliResult};

fn run(cli: &Cli) -> CliResult<()> {
    let cfg = RunConfig::from_cli(cli)?;
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    match &cli.command {
        Command::Spectrum => spectrum_cmd::run(&cfg),
        Command::Zeta {
            lambda,
            mode,
            sigma,
        } => zeta_cmd::run(&cfg, lambda, *mode, sigma),
        Command::Check { suite, nmax, seed } => check_cmd::run(&cfg, *suite, *nmax, *seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
