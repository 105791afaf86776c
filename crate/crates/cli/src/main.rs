use clap::Parser;
use dgmf_cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
