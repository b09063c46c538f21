use clap::Parser;
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = cbc_cli::Cli::parse();
    let mut out = std::io::stdout().lock();
    ExitCode::from(cbc_cli::run(&cli, &mut out))
}
