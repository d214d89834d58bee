use std::io::Write;
use std::process::ExitCode;

use bertrand_core::par::with_jobs;
use clap::Parser;

mod args;
mod commands;
mod config;

use args::{Cli, Command};
use commands::{Failure, Outcome};

fn dispatch(command: &Command) -> Result<Outcome, Failure> {
    match command {
        Command::Equilibrium(a) => commands::equilibrium(a),
        Command::Stability(a) => commands::stability(a),
        Command::Scan(a) => commands::scan(a),
        Command::Bifurcation1d(a) => commands::bifurcation_1d(a),
        Command::Bifurcation2d(a) => commands::bifurcation_2d(a),
        Command::Continuation(a) => commands::continuation(a),
        Command::Statics(a) => commands::statics(a),
        Command::Verify(a) => commands::verify(a),
    }
}

fn main() -> ExitCode {
    let argv = match config::expand(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let jobs = (cli.jobs > 0).then_some(cli.jobs);
    match with_jobs(jobs, || dispatch(&cli.command)) {
        Ok(out) => {
            if let Some(v) = out.json {
                let text = serde_json::to_string_pretty(&v).expect("serializable");
                // A closed pipe (e.g. `| head`) is not an error worth reporting.
                let _ = writeln!(std::io::stdout().lock(), "{text}");
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
