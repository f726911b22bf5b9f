use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use swapgame::cli::{exit_code, output_target, run, write_atomic, Cli, RunConfig};

fn main() -> ExitCode {
    let args = Cli::parse();
    let cfg = match &args.config {
        Some(path) => RunConfig::load(path),
        None => Ok(RunConfig::default()),
    };
    let result = cfg.and_then(|cfg| {
        let report = run(args.command, &cfg, args.seed)?;
        match output_target(args.out.as_deref(), &cfg) {
            Some(path) => write_atomic(&path, report.text.as_bytes())?,
            None => std::io::stdout().write_all(report.text.as_bytes())?,
        }
        Ok(report.passed)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("swapgame: Monte Carlo verification failed");
            ExitCode::from(4)
        }
        Err(e) => {
            eprintln!("swapgame: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
