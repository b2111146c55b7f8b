use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = pihl_cli::Cli::parse();
    match pihl_cli::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
