use std::process::ExitCode;

use clap::Parser;
use dpg_cli::{csv_string, run, CliError, RunConfig};

fn main() -> ExitCode {
    let config = match RunConfig::try_parse() {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(1);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match run(&config) {
        Ok(report) => {
            if config.csv.is_none() {
                print!("{}", csv_string(&report));
            }
            let failed = report.failed_levels();
            if failed.is_empty() {
                ExitCode::SUCCESS
            } else {
                report_error(&CliError::Solver { levels: failed })
            }
        }
        Err(e) => report_error(&e),
    }
}

fn report_error(e: &CliError) -> ExitCode {
    eprintln!("dpg: {e}");
    ExitCode::from(e.exit_code() as u8)
}
