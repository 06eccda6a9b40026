//! Basic and asset-detailed growth decompositions of the demo bundle, in
//! levels and per hour worked.

use tfp_accounts::{
    decompose_basic, decompose_detailed, demo_bundle_path, ict_contribution, load_economy,
    ClassificationConfig, Mode,
};

fn main() -> tfp_accounts::Result<()> {
    let bundle = demo_bundle_path();
    let config = ClassificationConfig::from_path(&bundle.join("classification.toml"))?;
    let ds = load_economy(&bundle, &config)?;

    for mode in [Mode::Levels, Mode::PerWorker] {
        println!("{mode:?} (log points x 100)");
        println!(
            "{:>6} {:>8} {:>8} {:>8} {:>8} {:>8}",
            "year", "growth", "ICT K", "other K", "labor", "TFP"
        );
        for t in ds.growth_years() {
            let d = decompose_detailed(&ds, t, mode)?;
            println!(
                "{t:>6} {:>8.3} {:>8.3} {:>8.3} {:>8.3} {:>8.3}",
                100.0 * d.output_growth,
                100.0 * d.ict_capital(),
                100.0 * d.non_ict_capital(),
                100.0 * d.labor_contribution,
                100.0 * d.tfp_residual,
            );
            let basic = decompose_basic(&ds, t, mode)?;
            assert!((basic.reconstructed_growth() - basic.output_growth).abs() < 1e-12);
        }
        println!();
    }

    println!("ICT contribution: capital deepening + ICT-producer TFP");
    for t in ds.growth_years() {
        let c = ict_contribution(&ds, t)?;
        println!(
            "{t}: {:.3} + {:.3} = {:.3}",
            100.0 * c.asset_term,
            100.0 * c.producer_tfp_term,
            100.0 * c.total
        );
    }
    Ok(())
}
