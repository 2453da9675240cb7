use std::process::ExitCode;

use clap::Parser;
use ergomax_cli::args::Cli;
use ergomax_cli::commands::run;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            match (&outcome.csv, cli.csv) {
                (Some(csv), true) => print!("{csv}"),
                _ => println!("{}", outcome.report.to_json()),
            }
            for f in &outcome.failures {
                eprintln!("check failed: {f}");
            }
            if outcome.failures.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(5)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
