use std::process::ExitCode;

use clap::Parser;

use kalpha_cli::cli::Cli;
use kalpha_cli::run;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run::execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
