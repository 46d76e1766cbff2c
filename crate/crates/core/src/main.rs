use std::io;
use std::process::ExitCode;

use clap::Parser;
use nlgen::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = io::stdout().lock();
    match run(&cli, &mut io::stdin().lock(), &mut stdout) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("nlgen: {e}");
            ExitCode::from(e.stage.exit_code() as u8)
        }
    }
}
