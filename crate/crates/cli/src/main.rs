use std::process::ExitCode;

use clap::Parser;

use shtuka_cli::{run_command, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run_command(&cli.command, &cli.flags) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match cli.flags.json.as_deref() {
        Some("-") => println!("{}", outcome.to_json()),
        Some(path) => {
            print!("{}", outcome.render());
            if let Err(e) = std::fs::write(path, outcome.to_json()) {
                eprintln!("error: {path}: {e}");
                return ExitCode::from(2);
            }
        }
        None => print!("{}", outcome.render()),
    }
    if outcome.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
