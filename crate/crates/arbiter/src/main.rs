use std::process::ExitCode;

use clap::Parser;
use goal_arbiter::cli::{run, Cli};

fn main() -> ExitCode {
    run(Cli::parse())
}
