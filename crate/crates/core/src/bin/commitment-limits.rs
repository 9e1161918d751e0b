use clap::Parser;
use commitment_limits::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
