use std::process::ExitCode;

use clap::Parser;
use volterra_blowup_cli::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match volterra_blowup_cli::execute(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("vblowup: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
