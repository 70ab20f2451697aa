mod args;
mod commands;
mod config;
mod error;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use config::RunConfig;
use error::CliError;

fn run(cli: Cli) -> error::Result<()> {
    let file = cli.config.as_deref();
    match &cli.command {
        Command::Convert(f) => commands::convert(&RunConfig::resolve(f, file)?),
        Command::Stats(f) => commands::stats(&RunConfig::resolve(f, file)?),
        Command::Agree(f) => commands::agree(&RunConfig::resolve(f, file)?),
        Command::Trends(f) => commands::trends(&RunConfig::resolve(f, file)?),
        Command::Compare(f) => commands::compare(&RunConfig::resolve(f, file)?),
        Command::Derive(d) => {
            commands::derive_cmd(&RunConfig::resolve(&d.flags, file)?, d.sentence.as_deref())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("udlf: {e}");
            e.exit_code()
        }
        Err(_) => CliError::Internal("unexpected panic".into()).exit_code(),
    }
}
