//! Domar-weighted aggregate TFP for the demo bundle, split between
//! ICT-producing industries and the rest of the economy.

use tfp_accounts::domar::domar_for_dataset;
use tfp_accounts::{demo_bundle_path, load_economy, ClassificationConfig};

fn main() -> tfp_accounts::Result<()> {
    let bundle = demo_bundle_path();
    let config = ClassificationConfig::from_path(&bundle.join("classification.toml"))?;
    let ds = load_economy(&bundle, &config)?;

    println!("year  aggregate  ICT producers  rest   weight sum");
    for t in ds.growth_years() {
        let d = domar_for_dataset(&ds, t)?;
        println!(
            "{t}  {:>8.4}%  {:>12.4}%  {:>6.4}%  {:.4}",
            100.0 * d.aggregate,
            100.0 * d.ict_producer_contribution,
            100.0 * d.non_ict_contribution,
            d.weight_sum()
        );
        for (id, w) in d.oversized_weights() {
            println!("      warning: {id} weight {w:.3} exceeds 1");
        }
    }
    Ok(())
}
