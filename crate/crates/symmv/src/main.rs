use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = symmv::Cli::parse();
    ExitCode::from(symmv::execute(&cli))
}
