use clap::Parser;
use contact_index::cli::{run, Cli};

fn main() {
    std::process::exit(run(&Cli::parse()));
}
