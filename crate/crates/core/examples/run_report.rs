//! Per-country summary of the demo bundle as deterministic JSON, written
//! atomically to a temporary directory.

use tfp_accounts::cli::{cmd_report, render_report_json, RunConfig};
use tfp_accounts::demo_bundle_path;
use tfp_accounts::report::write_atomic;

fn main() -> tfp_accounts::Result<()> {
    let report = cmd_report(&RunConfig::new(demo_bundle_path()))?;
    let json = render_report_json(&report, true)?;
    print!("{json}");

    let dir = std::env::temp_dir().join("tfp-accounts-example");
    std::fs::create_dir_all(&dir).map_err(|source| tfp_accounts::Error::Io {
        path: dir.clone(),
        source,
    })?;
    let path = dir.join("summary.json");
    write_atomic(&path, json.as_bytes())?;
    eprintln!("written to {}", path.display());
    Ok(())
}
