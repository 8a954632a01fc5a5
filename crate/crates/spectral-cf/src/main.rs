use std::process::ExitCode;

use clap::Parser;

use spectral_cf::cli::{configure_threads, exit_code, run, Cli, EXIT_VERIFICATION};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(exit_code(&e) as u8);
    }
    match run(&cli) {
        Ok(outcome) => {
            for w in &outcome.warnings {
                eprintln!("warning: {w}");
            }
            if outcome.verdict_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VERIFICATION as u8)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
