//! Growth accounting with ICT capital detail.
//!
//! The crate decomposes output and labor-productivity growth into
//! contributions from ICT capital, non-ICT capital, labor and total factor
//! productivity; estimates ICT investment from production, trade and
//! input-output data with the commodity-flow method; and aggregates industry
//! TFP growth with Domar weights, separating ICT-producing industries from
//! the rest of the economy.
//!
//! ## Modules
//!
//! - [`dataset`]: domain types, the CSV bundle loader, validation, and the
//!   [`growth_rate`](dataset::growth_rate) / [`two_period_share`](dataset::two_period_share) primitives
//! - [`growth_accounting`]: basic and asset-detailed decompositions and the ICT contribution
//! - [`commodity_flow`]: investment estimates and GFCF composition shares
//! - [`domar`]: Domar weights, aggregate TFP and the producer split
//! - [`cli`]: the `validate`, `decompose`, `invest`, `domar` and `report` commands
//! - [`report`]: deterministic JSON, input digests and atomic writes
//!
//! ## Examples
//!
//! Each major capability has a runnable example:
//!
//! ```bash
//! cargo run -p tfp-accounts --example decompose_demo
//! cargo run -p tfp-accounts --example cobb_douglas_recovery
//! cargo run -p tfp-accounts --example commodity_flow
//! cargo run -p tfp-accounts --example gfcf_shares
//! cargo run -p tfp-accounts --example domar_aggregation
//! cargo run -p tfp-accounts --example validate_bundle
//! cargo run -p tfp-accounts --example run_report
//! ```
//!
//! The demo bundle they read lives in `crates/core/data/demo`.

pub mod cli;
pub mod commodity_flow;
pub mod dataset;
pub mod domar;
mod error;
pub mod growth_accounting;
pub mod report;

pub use error::{Error, Result};

pub use commodity_flow::{
    estimate_investment, gfcf_shares, CommodityFlowInputs, GfcfScope, InvestmentEstimate,
    IoAllocationRatios, TradeFlows,
};
pub use dataset::{
    growth_rate, load_bundle, load_economy, two_period_share, validate, AnnualSeries,
    AssetCategory, ClassificationConfig, EconomyDataset, IndustryAccount, InputShares,
    ValidationReport, Year, YearShares,
};
pub use domar::{aggregate_tfp, domar_weight, split_by_producer, DomarWeightedTfp};
pub use growth_accounting::{
    decompose_basic, decompose_detailed, ict_contribution, Decomposition, DetailedDecomposition,
    IctContribution, Mode,
};

/// Path of the demo bundle shipped with the crate.
pub fn demo_bundle_path() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data/demo")
}
