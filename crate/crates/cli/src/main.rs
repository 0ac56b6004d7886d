use std::process::ExitCode;

use clap::Parser;
use spinpoly_cli::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = spinpoly_cli::configure_threads().and_then(|()| spinpoly_cli::run(cli));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("spinpoly: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
