use std::process::ExitCode;

use clap::Parser;
use qtomo_cli::{run, Cli, CliError, RunConfig};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = RunConfig::try_from(cli).and_then(|cfg| run(&cfg));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qtomo: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &CliError) -> ExitCode {
    ExitCode::from(e.exit_code() as u8)
}
