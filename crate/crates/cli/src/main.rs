use std::process::ExitCode;

use clap::Parser;
use irs_cli::{run, Cli};

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("irs: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
