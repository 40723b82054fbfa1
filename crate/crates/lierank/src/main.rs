use std::process::ExitCode;

use clap::Parser;
use lierank::cli::{error_json, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            e.exit();
        }
        Err(e) => {
            eprintln!("{}", error_json(&anyhow::Error::new(e)));
            return ExitCode::from(2);
        }
    };
    match cli.run() {
        Ok(manifest) => {
            eprintln!("wrote {}", manifest.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", error_json(&e));
            ExitCode::FAILURE
        }
    }
}
