use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = qwalk_cli::Cli::parse();
    ExitCode::from(qwalk_cli::run(&cli))
}
