//! Asset composition of investment under both totals.

use tfp_accounts::commodity_flow::{ict_share, load_gfcf};
use tfp_accounts::{demo_bundle_path, gfcf_shares, GfcfScope};

fn main() -> tfp_accounts::Result<()> {
    let table = load_gfcf(&demo_bundle_path().join("gfcf.csv"))?;
    for ((country, year), values) in &table {
        for scope in [GfcfScope::TotalNonResidential, GfcfScope::TotalEquipment] {
            let shares = gfcf_shares(values, scope)?;
            println!("{country} {year} {scope:?}");
            for (asset, share) in &shares {
                println!("  {asset:<4} {:>6.2}%", 100.0 * share);
            }
            println!("  ICT  {:>6.2}%\n", 100.0 * ict_share(&shares));
        }
    }
    Ok(())
}
