use std::process::ExitCode;

use clap::Parser;
use gridgame_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli).and_then(|out| out.write()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
