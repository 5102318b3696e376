use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use jetvar_cli::{execute, Cli};

fn main() -> ExitCode {
    // clap exits with 2 on usage errors and 0 for --help/--version.
    let cli = Cli::parse();
    let run = execute(&cli);
    print!("{}", run.stdout);
    eprint!("{}", run.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(run.code as u8)
}
