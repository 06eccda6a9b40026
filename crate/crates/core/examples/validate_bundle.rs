//! Validates a bundle directory and prints every finding.
//!
//! `cargo run --example validate_bundle -- path/to/bundle` (defaults to the demo).

use std::path::PathBuf;

use tfp_accounts::cli::{cmd_validate, render_validation, RunConfig};
use tfp_accounts::demo_bundle_path;

fn main() {
    let dir = std::env::args_os()
        .nth(1)
        .map_or_else(demo_bundle_path, PathBuf::from);
    match cmd_validate(&RunConfig::new(&dir)) {
        Ok(outcome) => {
            print!("{}", render_validation(&outcome.reports));
            std::process::exit(outcome.exit_code());
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
