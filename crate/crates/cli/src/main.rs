use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use fixpt::cli::Cli;
use fixpt::error::exit;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // clap's own code 2 would collide with "not converged".
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(exit::CONFIG),
            };
        }
    };
    match fixpt::dispatch(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("fixpt: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
