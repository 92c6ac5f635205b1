mod args;
mod commands;
mod report;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::{cmd_average, cmd_curve, cmd_indicator, cmd_minimize, cmd_reproduce, cmd_sample};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Indicator(a) => cmd_indicator(a),
        Command::Average(a) => cmd_average(a),
        Command::Minimize(a) => cmd_minimize(a),
        Command::Curve(a) => cmd_curve(a),
        Command::Sample(a) => cmd_sample(a),
        Command::ReproducePaper(a) => cmd_reproduce(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
