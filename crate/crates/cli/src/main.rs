use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = prodbase_cli::Cli::parse();
    let code = prodbase_cli::run(
        &cli,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    ExitCode::from(code)
}
