//! Decomposition of output (or labor-productivity) growth into capital, labor
//! and TFP contributions, with optional ICT / non-ICT asset detail.
//!
//! All contributions are in log points per year. Weights are two-period
//! averages of the value shares and TFP is always the residual.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::dataset::{
    log_growth, two_period_share, AnnualSeries, AssetCategory, EconomyDataset, Year, YearShares,
};
use crate::domar::domar_weight;
use crate::error::{Error, Result};

/// Whether growth is measured for the levels or per unit of labor input.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[default]
    Levels,
    PerWorker,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decomposition {
    pub year: Year,
    pub mode: Mode,
    pub output_growth: f64,
    pub capital_contribution: f64,
    /// Always zero in [`Mode::PerWorker`].
    pub labor_contribution: f64,
    pub tfp_residual: f64,
}

impl Decomposition {
    pub fn reconstructed_growth(&self) -> f64 {
        self.capital_contribution + self.labor_contribution + self.tfp_residual
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetailedDecomposition {
    pub year: Year,
    pub mode: Mode,
    pub output_growth: f64,
    pub ict_asset_contributions: BTreeMap<AssetCategory, f64>,
    pub non_ict_asset_contributions: BTreeMap<AssetCategory, f64>,
    pub labor_contribution: f64,
    pub tfp_residual: f64,
}

impl DetailedDecomposition {
    pub fn ict_capital(&self) -> f64 {
        self.ict_asset_contributions.values().sum()
    }

    pub fn non_ict_capital(&self) -> f64 {
        self.non_ict_asset_contributions.values().sum()
    }

    pub fn reconstructed_growth(&self) -> f64 {
        self.ict_capital() + self.non_ict_capital() + self.labor_contribution + self.tfp_residual
    }
}

/// ICT contribution to growth: capital services from ICT assets plus the
/// output-share weighted TFP growth of ICT-producing industries.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IctContribution {
    pub year: Year,
    pub asset_term: f64,
    pub producer_tfp_term: f64,
    pub total: f64,
}

/// Growth of `series` at `t`, or of `series / labor` in per-worker mode.
fn mode_growth(
    name: &str,
    series: &AnnualSeries,
    labor: &AnnualSeries,
    t: Year,
    mode: Mode,
) -> Result<f64> {
    match mode {
        Mode::Levels => log_growth(name, series, t),
        Mode::PerWorker => {
            let per_worker: AnnualSeries = [t - 1, t]
                .into_iter()
                .map(|year| {
                    let value = series.get(year).ok_or_else(|| Error::MissingYear {
                        series: name.to_string(),
                        year,
                    })?;
                    let hours = labor.get(year).ok_or_else(|| Error::MissingYear {
                        series: "labor".to_string(),
                        year,
                    })?;
                    if hours.is_nan() || hours <= 0.0 {
                        return Err(Error::NonPositive {
                            series: "labor".to_string(),
                            year,
                            value: hours,
                        });
                    }
                    Ok((year, value / hours))
                })
                .collect::<Result<_>>()?;
            log_growth(&format!("{name} per labor unit"), &per_worker, t)
        }
    }
}

fn share_pair(dataset: &EconomyDataset, t: Year) -> Result<(&YearShares, &YearShares)> {
    let get = |year| {
        let shares = dataset
            .shares
            .get(year)
            .ok_or(Error::MissingShares { year })?;
        shares
            .check_closure()
            .map_err(|message| Error::InvalidShares { year, message })?;
        Ok::<_, Error>(shares)
    };
    Ok((get(t)?, get(t - 1)?))
}

pub fn decompose_basic(dataset: &EconomyDataset, t: Year, mode: Mode) -> Result<Decomposition> {
    let (current, previous) = share_pair(dataset, t)?;
    let v_k = two_period_share(current.v_k, previous.v_k)?;
    let v_l = two_period_share(current.v_l, previous.v_l)?;

    let output_growth = mode_growth("output", &dataset.output, &dataset.labor, t, mode)?;
    let capital_growth = mode_growth(
        "capital_total",
        &dataset.capital_total,
        &dataset.labor,
        t,
        mode,
    )?;
    let capital_contribution = v_k * capital_growth;
    let labor_contribution = match mode {
        Mode::Levels => v_l * log_growth("labor", &dataset.labor, t)?,
        Mode::PerWorker => 0.0,
    };

    Ok(Decomposition {
        year: t,
        mode,
        output_growth,
        capital_contribution,
        labor_contribution,
        tfp_residual: output_growth - capital_contribution - labor_contribution,
    })
}

/// Per-asset `v̄_i · Δk_i`, split into ICT and non-ICT maps.
fn asset_contributions(
    dataset: &EconomyDataset,
    current: &YearShares,
    previous: &YearShares,
    t: Year,
    mode: Mode,
) -> Result<(BTreeMap<AssetCategory, f64>, BTreeMap<AssetCategory, f64>)> {
    let mut ict = BTreeMap::new();
    let mut non_ict = BTreeMap::new();
    for asset in AssetCategory::ALL {
        let (now, before) = (current.asset_share(asset), previous.asset_share(asset));
        if now.is_none() && before.is_none() {
            continue;
        }
        let weight = two_period_share(now.unwrap_or(0.0), before.unwrap_or(0.0))?;
        let contribution = match dataset.capital_by_asset.get(&asset) {
            Some(series) => {
                let name = format!("capital_asset {asset}");
                weight * mode_growth(&name, series, &dataset.labor, t, mode)?
            }
            None if weight == 0.0 => 0.0,
            None => {
                return Err(Error::MissingAssetSeries {
                    asset: asset.to_string(),
                })
            }
        };
        if asset.is_ict() {
            ict.insert(asset, contribution);
        } else {
            non_ict.insert(asset, contribution);
        }
    }
    Ok((ict, non_ict))
}

pub fn decompose_detailed(
    dataset: &EconomyDataset,
    t: Year,
    mode: Mode,
) -> Result<DetailedDecomposition> {
    let (current, previous) = share_pair(dataset, t)?;
    let (ict, non_ict) = asset_contributions(dataset, current, previous, t, mode)?;
    let output_growth = mode_growth("output", &dataset.output, &dataset.labor, t, mode)?;
    let labor_contribution = match mode {
        Mode::Levels => {
            two_period_share(current.v_l, previous.v_l)? * log_growth("labor", &dataset.labor, t)?
        }
        Mode::PerWorker => 0.0,
    };

    let mut out = DetailedDecomposition {
        year: t,
        mode,
        output_growth,
        ict_asset_contributions: ict,
        non_ict_asset_contributions: non_ict,
        labor_contribution,
        tfp_residual: 0.0,
    };
    out.tfp_residual =
        output_growth - out.ict_capital() - out.non_ict_capital() - labor_contribution;
    Ok(out)
}

/// Weight of an ICT producer: the two-period `u_c` share when both years carry
/// one, otherwise the industry's Domar weight against GDP (the output series).
fn producer_weight(
    dataset: &EconomyDataset,
    id: &str,
    current: &YearShares,
    previous: &YearShares,
    t: Year,
) -> Result<f64> {
    if let (Some(&now), Some(&before)) = (current.u_c.get(id), previous.u_c.get(id)) {
        return two_period_share(now, before);
    }
    let account = dataset
        .industries
        .get(id)
        .ok_or_else(|| Error::UnknownIndustry(id.to_string()))?;
    let gvo = |year| {
        account
            .gross_output
            .get(year)
            .ok_or_else(|| Error::MissingYear {
                series: format!("gross_output {id}"),
                year,
            })
    };
    let gdp = |year| {
        dataset.output.get(year).ok_or_else(|| Error::MissingYear {
            series: "output".to_string(),
            year,
        })
    };
    domar_weight(gvo(t)?, gvo(t - 1)?, gdp(t)?, gdp(t - 1)?)
}

pub fn ict_contribution(dataset: &EconomyDataset, t: Year) -> Result<IctContribution> {
    let (current, previous) = share_pair(dataset, t)?;
    let (ict, _) = asset_contributions(dataset, current, previous, t, Mode::Levels)?;
    let asset_term: f64 = ict.values().sum();

    let mut producer_tfp_term = 0.0;
    for id in &dataset.ict_producer_ids {
        let weight = producer_weight(dataset, id, current, previous, t)?;
        let account = dataset
            .industries
            .get(id)
            .ok_or_else(|| Error::UnknownIndustry(id.clone()))?;
        let tfp = account
            .tfp_growth
            .get(&t)
            .copied()
            .ok_or_else(|| Error::MissingTfp {
                industry: id.clone(),
                year: t,
            })?;
        producer_tfp_term += weight * tfp;
    }

    Ok(IctContribution {
        year: t,
        asset_term,
        producer_tfp_term,
        total: asset_term + producer_tfp_term,
    })
}
