//! Domar aggregation of industry TFP growth.
//!
//! Aggregate TFP growth is the sum of industry TFP growth rates weighted by
//! the two-period average ratio of industry gross output to GDP. Because gross
//! output double-counts intermediate deliveries, the weights may sum to more
//! than one.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::dataset::{AnnualSeries, EconomyDataset, IndustryAccount, Year};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DomarWeightedTfp {
    pub year: Year,
    pub weights: BTreeMap<String, f64>,
    /// Industry TFP growth that entered the aggregate.
    pub tfp_growth: BTreeMap<String, f64>,
    pub aggregate: f64,
    pub ict_producer_contribution: f64,
    pub non_ict_contribution: f64,
}

impl DomarWeightedTfp {
    pub fn weight_sum(&self) -> f64 {
        self.weights.values().sum()
    }

    /// Industries whose weight exceeds one: their gross output is larger than
    /// GDP, which usually signals a very open, production-heavy economy and
    /// deserves a second look rather than an adjustment.
    pub fn oversized_weights(&self) -> impl Iterator<Item = (&str, f64)> {
        self.weights
            .iter()
            .filter(|(_, &w)| w > 1.0)
            .map(|(id, &w)| (id.as_str(), w))
    }
}

/// `½ (GVO_t / GDP_t + GVO_{t-1} / GDP_{t-1})`.
pub fn domar_weight(gvo_t: f64, gvo_prev: f64, gdp_t: f64, gdp_prev: f64) -> Result<f64> {
    for gdp in [gdp_t, gdp_prev] {
        if !gdp.is_finite() || gdp <= 0.0 {
            return Err(Error::NonPositiveGdp { value: gdp });
        }
    }
    for gvo in [gvo_t, gvo_prev] {
        if !gvo.is_finite() || gvo < 0.0 {
            return Err(Error::InvalidShare { value: gvo });
        }
    }
    Ok(0.5 * (gvo_t / gdp_t + gvo_prev / gdp_prev))
}

fn value_at(series: &AnnualSeries, name: &str, year: Year) -> Result<f64> {
    series.get(year).ok_or_else(|| Error::MissingYear {
        series: name.to_string(),
        year,
    })
}

/// Domar-weighted aggregate of every industry's TFP growth at `t`. The
/// producer split is left empty (all of the aggregate is attributed to
/// non-ICT industries) until [`split_by_producer`] runs.
pub fn aggregate_tfp(
    industries: &BTreeMap<String, IndustryAccount>,
    gdp: &AnnualSeries,
    t: Year,
) -> Result<DomarWeightedTfp> {
    let gdp_t = value_at(gdp, "GDP", t)?;
    let gdp_prev = value_at(gdp, "GDP", t - 1)?;

    let mut weights = BTreeMap::new();
    let mut tfp_growth = BTreeMap::new();
    let mut aggregate = 0.0;
    for (id, account) in industries {
        let name = format!("gross_output {id}");
        let weight = domar_weight(
            value_at(&account.gross_output, &name, t)?,
            value_at(&account.gross_output, &name, t - 1)?,
            gdp_t,
            gdp_prev,
        )?;
        let tfp = account
            .tfp_growth
            .get(&t)
            .copied()
            .ok_or_else(|| Error::MissingTfp {
                industry: id.clone(),
                year: t,
            })?;
        aggregate += weight * tfp;
        weights.insert(id.clone(), weight);
        tfp_growth.insert(id.clone(), tfp);
    }

    Ok(DomarWeightedTfp {
        year: t,
        weights,
        tfp_growth,
        aggregate,
        ict_producer_contribution: 0.0,
        non_ict_contribution: aggregate,
    })
}

/// Attributes the aggregate to ICT-producing industries and the rest.
pub fn split_by_producer(
    result: &DomarWeightedTfp,
    ict_producer_ids: &BTreeSet<String>,
) -> Result<DomarWeightedTfp> {
    let mut ict = 0.0;
    for id in ict_producer_ids {
        let (Some(w), Some(a)) = (result.weights.get(id), result.tfp_growth.get(id)) else {
            return Err(Error::UnknownIndustry(id.clone()));
        };
        ict += w * a;
    }
    Ok(DomarWeightedTfp {
        ict_producer_contribution: ict,
        non_ict_contribution: result.aggregate - ict,
        ..result.clone()
    })
}

/// Aggregation and producer split for one economy, with its output series as GDP.
pub fn domar_for_dataset(dataset: &EconomyDataset, t: Year) -> Result<DomarWeightedTfp> {
    if dataset.output.is_empty() {
        return Err(Error::MissingGdp(dataset.country.clone()));
    }
    let aggregate = aggregate_tfp(&dataset.industries, &dataset.output, t)?;
    split_by_producer(&aggregate, &dataset.ict_producer_ids)
}
