use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use cdsclear::cli::{exit_code, run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Usage errors share the invalid-input code; help and version requests succeed.
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let mut buffer = Vec::new();
    let result = run(&cli, &mut buffer);
    // A closed pipe (e.g. `| head`) is not an error of the command itself.
    let _ = std::io::stdout().write_all(&buffer);
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
