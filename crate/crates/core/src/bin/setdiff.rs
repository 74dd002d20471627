use std::process::ExitCode;

use clap::Parser;
use setdiff::cli::{run, thread_count, Cli};
use setdiff::report::render;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = thread_count(cli.threads) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("setdiff: cannot configure {n} threads: {e}");
        }
    }
    let report = match run(&cli) {
        Ok(report) => report,
        Err(failure) => {
            eprintln!("setdiff: {failure}");
            return ExitCode::from(failure.exit_code() as u8);
        }
    };
    let text = render(&report);
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("setdiff: {}: {e}", path.display());
                return ExitCode::from(3);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::SUCCESS
}
