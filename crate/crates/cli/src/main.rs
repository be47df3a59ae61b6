use std::io::Write;

use clap::Parser;
use nsga_maximin_cli::cli::{execute, Cli};

fn main() {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(text) => {
            let _ = std::io::stdout().write_all(text.as_bytes());
        }
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(err.exit_code());
        }
    }
}
