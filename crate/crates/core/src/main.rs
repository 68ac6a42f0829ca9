use clap::Parser;
use pisolve::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
