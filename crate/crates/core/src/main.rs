use clap::Parser;

use kgpencil::cli::{init_threads, run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = init_threads() {
        eprintln!("error: {e}");
        std::process::exit(2);
    }
    std::process::exit(run(cli));
}
