use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use mvglue_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // clap uses 0 for --help/--version and 2 for usage errors
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let outcome = run(&cli);
    let result = if outcome.aborted {
        std::io::stderr().write_all(outcome.output.as_bytes())
    } else {
        std::io::stdout().write_all(outcome.output.as_bytes())
    };
    if result.is_err() {
        return ExitCode::from(2);
    }
    ExitCode::from(outcome.code as u8)
}
