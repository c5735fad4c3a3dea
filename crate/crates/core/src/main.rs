use clap::Parser;

use acc2omp::cli::{self, CliInvocation};

fn main() {
    let inv = match CliInvocation::try_parse() {
        Ok(inv) => inv,
        Err(e) => {
            let _ = e.print();
            std::process::exit(if e.use_stderr() { cli::EXIT_USAGE } else { cli::EXIT_OK });
        }
    };
    std::process::exit(cli::run(inv));
}
