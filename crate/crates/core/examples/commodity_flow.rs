//! ICT investment by the commodity-flow method for the demo bundle, plus the
//! refusal for software.

use tfp_accounts::commodity_flow::{load_flows, load_io_ratios};
use tfp_accounts::{
    demo_bundle_path, estimate_investment, AssetCategory, CommodityFlowInputs, Error,
};

fn main() -> tfp_accounts::Result<()> {
    let bundle = demo_bundle_path();
    let flows = load_flows(&bundle.join("flows.csv"))?;
    let ratios = load_io_ratios(&bundle.join("io_ratios.csv"))?;

    println!("country asset year  domestic  imported     total");
    for (key, inputs) in &flows.inputs {
        let ratio = &ratios[key];
        for year in inputs.years() {
            let est = estimate_investment(inputs, ratio, year)?;
            println!(
                "{:<7} {:<5} {year} {:>9.2} {:>9.2} {:>9.2}",
                key.0, key.1, est.domestic_component, est.import_component, est.total
            );
        }
    }

    match CommodityFlowInputs::new(AssetCategory::Software) {
        Err(Error::SoftwareNotEligible) => println!("\nsoftware: {}", Error::SoftwareNotEligible),
        other => panic!("software should be refused, got {other:?}"),
    }
    Ok(())
}
