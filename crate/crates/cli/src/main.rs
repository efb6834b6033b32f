//! `pagraph`: command-line front end for the `pagraph` library.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use commands::Ctx;
use output::{CliError, CliResult};

fn run(cli: Cli) -> CliResult<u8> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(CliError::usage("--jobs must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::usage(format!("cannot start {jobs} workers: {e}")))?;
    }
    let ctx = Ctx { out_dir: cli.out_dir };
    match &cli.command {
        Command::Generate(a) => commands::generate_cmd(&ctx, a),
        Command::Degrees(a) => commands::degrees_cmd(&ctx, a),
        Command::Symmetry(a) => commands::symmetry_cmd(&ctx, a),
        Command::Entropy(a) => commands::entropy_cmd(&ctx, a),
        Command::Dag(a) => commands::dag_cmd(&ctx, a),
        Command::Verify(a) => commands::verify_cmd(&ctx, a),
        Command::Report(a) => commands::report_cmd(&ctx, a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
