mod args;
mod commands;
mod error;
mod recipe;
mod table;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use error::Result;

fn dispatch(command: &Command) -> Result<()> {
    match command {
        Command::Membership(a) => commands::membership(a),
        Command::ElCurve(a) => commands::el_curve_cmd(a, false),
        Command::LowerBound(a) => commands::el_curve_cmd(a, true),
        Command::Coverage(a) => commands::coverage_cmd(a),
        Command::Knapsack(a) => commands::knapsack(a),
        Command::SelfTest(a) => commands::self_test(a),
        Command::Recipe(a) => recipe::run(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fuzzyci: {e}");
            e.exit_code()
        }
    }
}
