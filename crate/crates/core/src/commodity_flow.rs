//! Commodity-flow estimates of investment by asset, and GFCF composition.
//!
//! Investment in a good is domestic output net of exports plus imports net of
//! re-exports, each allocated to investment with a ratio taken from an
//! input-output table. Software never passes through this route; its
//! investment has to be supplied directly.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use crate::dataset::{parse_table, read_text, AssetCategory, Year};
use crate::error::{Error, Result};

/// An asset that may be estimated with the commodity-flow method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FlowItem(AssetCategory);

impl FlowItem {
    pub fn asset(self) -> AssetCategory {
        self.0
    }
}

impl TryFrom<AssetCategory> for FlowItem {
    type Error = Error;

    fn try_from(asset: AssetCategory) -> Result<Self> {
        if asset.commodity_flow_eligible() {
            Ok(FlowItem(asset))
        } else {
            Err(Error::SoftwareNotEligible)
        }
    }
}

/// Production and trade of one good in one year.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct TradeFlows {
    /// Domestic output `Q`.
    pub domestic_output: f64,
    /// Exports from domestic production `E^d`.
    pub exports: f64,
    /// Imports `M`.
    pub imports: f64,
    /// Re-exports `E^r`.
    pub re_exports: f64,
}

impl TradeFlows {
    pub fn new(domestic_output: f64, exports: f64, imports: f64, re_exports: f64) -> Self {
        Self {
            domestic_output,
            exports,
            imports,
            re_exports,
        }
    }

    pub fn scaled(self, factor: f64) -> Self {
        Self::new(
            self.domestic_output * factor,
            self.exports * factor,
            self.imports * factor,
            self.re_exports * factor,
        )
    }

    fn check(&self) -> Result<()> {
        let fields = [
            ("Q", self.domestic_output),
            ("E_d", self.exports),
            ("M", self.imports),
            ("E_r", self.re_exports),
        ];
        for (name, v) in fields {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidFlows(format!("{name} = {v} is negative")));
            }
        }
        if self.exports > self.domestic_output {
            return Err(Error::InvalidFlows(format!(
                "exports {} exceed domestic output {}",
                self.exports, self.domestic_output
            )));
        }
        if self.re_exports > self.imports {
            return Err(Error::InvalidFlows(format!(
                "re-exports {} exceed imports {}",
                self.re_exports, self.imports
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommodityFlowInputs {
    item: FlowItem,
    by_year: BTreeMap<Year, TradeFlows>,
}

impl CommodityFlowInputs {
    /// Refuses [`AssetCategory::Software`].
    pub fn new(asset: AssetCategory) -> Result<Self> {
        Ok(Self {
            item: FlowItem::try_from(asset)?,
            by_year: BTreeMap::new(),
        })
    }

    pub fn item(&self) -> FlowItem {
        self.item
    }

    pub fn insert(&mut self, year: Year, flows: TradeFlows) -> Option<TradeFlows> {
        self.by_year.insert(year, flows)
    }

    pub fn get(&self, year: Year) -> Option<&TradeFlows> {
        self.by_year.get(&year)
    }

    pub fn years(&self) -> impl Iterator<Item = Year> + '_ {
        self.by_year.keys().copied()
    }

    pub fn with(mut self, year: Year, flows: TradeFlows) -> Self {
        self.insert(year, flows);
        self
    }
}

/// Shares of domestic supply and of net imports that an input-output table
/// allocates to investment, for one good.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IoAllocationRatios {
    pub item: AssetCategory,
    /// `I(Q) / (Q - E^d)` from the I/O table.
    pub domestic_ratio: f64,
    /// `I(M) / (M - E^r)` from the I/O table.
    pub import_ratio: f64,
    pub io_reference_year: Year,
}

impl IoAllocationRatios {
    pub fn new(
        item: AssetCategory,
        domestic_ratio: f64,
        import_ratio: f64,
        io_reference_year: Year,
    ) -> Result<Self> {
        for value in [domestic_ratio, import_ratio] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::InvalidRatio { value });
            }
        }
        Ok(Self {
            item,
            domestic_ratio,
            import_ratio,
            io_reference_year,
        })
    }

    /// Derives both ratios from I/O-table totals.
    pub fn from_io_totals(
        item: AssetCategory,
        investment_from_domestic: f64,
        domestic_use: f64,
        investment_from_imports: f64,
        net_imports: f64,
        io_reference_year: Year,
    ) -> Result<Self> {
        let ratio = |num: f64, den: f64, what: &str| {
            if den > 0.0 {
                Ok(num / den)
            } else {
                Err(Error::ZeroDenominator(format!(
                    "{what} in I/O table for {item}"
                )))
            }
        };
        Self::new(
            item,
            ratio(investment_from_domestic, domestic_use, "domestic use")?,
            ratio(investment_from_imports, net_imports, "net imports")?,
            io_reference_year,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InvestmentEstimate {
    pub item: AssetCategory,
    pub year: Year,
    pub domestic_component: f64,
    pub import_component: f64,
    pub total: f64,
}

pub fn estimate_investment(
    flows: &CommodityFlowInputs,
    ratios: &IoAllocationRatios,
    t: Year,
) -> Result<InvestmentEstimate> {
    let item = flows.item().asset();
    if !item.commodity_flow_eligible() || !ratios.item.commodity_flow_eligible() {
        return Err(Error::SoftwareNotEligible);
    }
    if ratios.item != item {
        return Err(Error::InvalidFlows(format!(
            "ratios for {} applied to flows of {item}",
            ratios.item
        )));
    }
    for value in [ratios.domestic_ratio, ratios.import_ratio] {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::InvalidRatio { value });
        }
    }
    let year_flows = flows.get(t).ok_or_else(|| Error::MissingYear {
        series: format!("flows {item}"),
        year: t,
    })?;
    year_flows.check()?;

    let domestic_component =
        (year_flows.domestic_output - year_flows.exports) * ratios.domestic_ratio;
    let import_component = (year_flows.imports - year_flows.re_exports) * ratios.import_ratio;
    Ok(InvestmentEstimate {
        item,
        year: t,
        domestic_component,
        import_component,
        total: domestic_component + import_component,
    })
}

/// Denominator for GFCF composition shares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GfcfScope {
    /// All six categories.
    TotalNonResidential,
    /// Everything except non-residential structures.
    TotalEquipment,
}

impl GfcfScope {
    pub fn includes(self, asset: AssetCategory) -> bool {
        match self {
            GfcfScope::TotalNonResidential => true,
            GfcfScope::TotalEquipment => asset != AssetCategory::NonResidentialStructures,
        }
    }
}

/// Each in-scope category's fraction of the scope total.
pub fn gfcf_shares(
    gfcf_by_category: &BTreeMap<AssetCategory, f64>,
    scope: GfcfScope,
) -> Result<BTreeMap<AssetCategory, f64>> {
    if let Some((asset, &v)) = gfcf_by_category
        .iter()
        .find(|(_, v)| !v.is_finite() || **v < 0.0)
    {
        return Err(Error::InvalidFlows(format!("GFCF for {asset} is {v}")));
    }
    let in_scope = || gfcf_by_category.iter().filter(|(a, _)| scope.includes(**a));
    let denominator: f64 = in_scope().map(|(_, v)| v).sum();
    if denominator <= 0.0 {
        return Err(Error::ZeroDenominator(format!("GFCF total for {scope:?}")));
    }
    Ok(in_scope().map(|(&a, &v)| (a, v / denominator)).collect())
}

/// Combined share of the ICT categories in a share map.
pub fn ict_share(shares: &BTreeMap<AssetCategory, f64>) -> f64 {
    shares
        .iter()
        .filter(|(a, _)| a.is_ict())
        .map(|(_, v)| v)
        .sum()
}

// ---------------------------------------------------------------------------
// Files

pub const FLOWS_FILE: &str = "flows.csv";
pub const IO_RATIOS_FILE: &str = "io_ratios.csv";
pub const GFCF_FILE: &str = "gfcf.csv";

const FLOWS_COLUMNS: [&str; 7] = ["country", "asset", "year", "Q", "E_d", "M", "E_r"];
const IO_COLUMNS: [&str; 5] = [
    "country",
    "asset",
    "domestic_ratio",
    "import_ratio",
    "io_reference_year",
];
const GFCF_COLUMNS: [&str; 4] = ["country", "year", "asset", "value"];

/// A flows.csv row that names software and was therefore set aside.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefusedRow {
    pub line: u64,
    pub country: String,
    pub year: Year,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct FlowTable {
    pub inputs: BTreeMap<(String, AssetCategory), CommodityFlowInputs>,
    pub refused: Vec<RefusedRow>,
}

pub fn parse_flows(text: &str) -> Result<FlowTable> {
    let mut table = FlowTable::default();
    parse_table(FLOWS_FILE, text, &FLOWS_COLUMNS, |row| {
        let country = row.required("country")?.to_string();
        let asset = row.asset("asset")?;
        let year = row.year("year")?;
        let flows = TradeFlows::new(
            row.number("Q")?,
            row.number("E_d")?,
            row.number("M")?,
            row.number("E_r")?,
        );
        if !asset.commodity_flow_eligible() {
            table.refused.push(RefusedRow {
                line: row.line,
                country,
                year,
            });
            return Ok(());
        }
        flows.check().map_err(|e| row.malformed(e.to_string()))?;
        let key = (country.clone(), asset);
        let inputs = match table.inputs.get_mut(&key) {
            Some(inputs) => inputs,
            None => table
                .inputs
                .entry(key)
                .or_insert(CommodityFlowInputs::new(asset)?),
        };
        if inputs.insert(year, flows).is_some() {
            return Err(row.duplicate(format!("{country} ({year}, {asset})")));
        }
        Ok(())
    })?;
    table
        .refused
        .sort_by(|a, b| (&a.country, a.year, a.line).cmp(&(&b.country, b.year, b.line)));
    Ok(table)
}

pub fn load_flows(path: &Path) -> Result<FlowTable> {
    parse_flows(&read_text(path)?)
}

pub fn parse_io_ratios(
    text: &str,
) -> Result<BTreeMap<(String, AssetCategory), IoAllocationRatios>> {
    let mut out = BTreeMap::new();
    parse_table(IO_RATIOS_FILE, text, &IO_COLUMNS, |row| {
        let country = row.required("country")?.to_string();
        let asset = row.asset("asset")?;
        let ratios = IoAllocationRatios::new(
            asset,
            row.number("domestic_ratio")?,
            row.number("import_ratio")?,
            row.year("io_reference_year")?,
        )
        .map_err(|e| row.malformed(e.to_string()))?;
        if out.insert((country.clone(), asset), ratios).is_some() {
            return Err(row.duplicate(format!("{country} {asset}")));
        }
        Ok(())
    })?;
    Ok(out)
}

pub fn load_io_ratios(
    path: &Path,
) -> Result<BTreeMap<(String, AssetCategory), IoAllocationRatios>> {
    parse_io_ratios(&read_text(path)?)
}

/// GFCF by category, keyed by (country, year).
pub type GfcfTable = BTreeMap<(String, Year), BTreeMap<AssetCategory, f64>>;

pub fn parse_gfcf(text: &str) -> Result<GfcfTable> {
    let mut out = GfcfTable::new();
    parse_table(GFCF_FILE, text, &GFCF_COLUMNS, |row| {
        let country = row.required("country")?.to_string();
        let year = row.year("year")?;
        let asset = row.asset("asset")?;
        let value = row.number("value")?;
        if value < 0.0 {
            return Err(row.malformed(format!("negative GFCF {value}")));
        }
        let cell = out.entry((country.clone(), year)).or_default();
        if cell.insert(asset, value).is_some() {
            return Err(row.duplicate(format!("{country} ({year}, {asset})")));
        }
        Ok(())
    })?;
    Ok(out)
}

pub fn load_gfcf(path: &Path) -> Result<GfcfTable> {
    parse_gfcf(&read_text(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use AssetCategory::*;

    fn inputs(asset: AssetCategory, flows: TradeFlows) -> CommodityFlowInputs {
        CommodityFlowInputs::new(asset).unwrap().with(2000, flows)
    }

    fn ratios(asset: AssetCategory, d: f64, m: f64) -> IoAllocationRatios {
        IoAllocationRatios::new(asset, d, m, 1995).unwrap()
    }

    #[test]
    fn hand_evaluated_estimate() {
        let est = estimate_investment(
            &inputs(OfficeComputer, TradeFlows::new(100.0, 20.0, 50.0, 10.0)),
            &ratios(OfficeComputer, 0.25, 0.5),
            2000,
        )
        .unwrap();
        assert_eq!(est.domestic_component, 20.0);
        assert_eq!(est.import_component, 20.0);
        assert_eq!(est.total, 40.0);
    }

    #[test]
    fn zero_flows() {
        let est = estimate_investment(
            &inputs(Communication, TradeFlows::default()),
            &ratios(Communication, 0.3, 0.9),
            2000,
        )
        .unwrap();
        assert_eq!(est.total, 0.0);
    }

    #[test]
    fn full_allocation_returns_supply() {
        let est = estimate_investment(
            &inputs(Transport, TradeFlows::new(70.0, 0.0, 30.5, 0.0)),
            &ratios(Transport, 1.0, 1.0),
            2000,
        )
        .unwrap();
        assert_eq!(est.total, 100.5);
    }

    #[test]
    fn software_is_refused() {
        let err = CommodityFlowInputs::new(Software).unwrap_err();
        assert_eq!(err.to_string(), "commodity flow not applicable to software");
        assert!(FlowItem::try_from(Software).is_err());

        let err = estimate_investment(
            &inputs(OfficeComputer, TradeFlows::new(1.0, 0.0, 1.0, 0.0)),
            &ratios(Software, 0.5, 0.5),
            2000,
        )
        .unwrap_err();
        assert!(matches!(err, Error::SoftwareNotEligible));
    }

    #[test]
    fn exports_beyond_output_is_a_data_error() {
        let err = estimate_investment(
            &inputs(OtherEquipment, TradeFlows::new(10.0, 11.0, 5.0, 0.0)),
            &ratios(OtherEquipment, 0.5, 0.5),
            2000,
        )
        .unwrap_err();
        assert!(err.to_string().contains("exceed domestic output"), "{err}");

        let err = estimate_investment(
            &inputs(OtherEquipment, TradeFlows::new(10.0, 1.0, 5.0, 6.0)),
            &ratios(OtherEquipment, 0.5, 0.5),
            2000,
        )
        .unwrap_err();
        assert!(err.to_string().contains("exceed imports"), "{err}");
    }

    #[test]
    fn negative_flows_are_not_clamped() {
        let err = estimate_investment(
            &inputs(OtherEquipment, TradeFlows::new(10.0, -1.0, 5.0, 0.0)),
            &ratios(OtherEquipment, 0.5, 0.5),
            2000,
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidFlows(_)));
    }

    #[test]
    fn ratio_bounds() {
        assert!(IoAllocationRatios::new(Transport, 1.2, 0.5, 2000).is_err());
        assert!(IoAllocationRatios::new(Transport, 0.5, -0.1, 2000).is_err());
        let r = IoAllocationRatios::from_io_totals(Transport, 20.0, 80.0, 5.0, 10.0, 1995).unwrap();
        assert_eq!((r.domestic_ratio, r.import_ratio), (0.25, 0.5));
        assert!(IoAllocationRatios::from_io_totals(Transport, 1.0, 0.0, 1.0, 1.0, 1995).is_err());
    }

    fn figure_values() -> BTreeMap<AssetCategory, f64> {
        [
            (OfficeComputer, 5.0),
            (Communication, 5.0),
            (Software, 7.1),
            (OtherEquipment, 40.0),
            (Transport, 15.0),
            (NonResidentialStructures, 27.9),
        ]
        .into_iter()
        .collect()
    }

    #[test]
    fn shares_over_non_residential_total() {
        let shares = gfcf_shares(&figure_values(), GfcfScope::TotalNonResidential).unwrap();
        assert!((ict_share(&shares) - 0.171).abs() < 1e-12);
        assert!((shares.values().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn shares_over_equipment_total() {
        let shares = gfcf_shares(&figure_values(), GfcfScope::TotalEquipment).unwrap();
        assert!(!shares.contains_key(&NonResidentialStructures));
        assert!((ict_share(&shares) - 17.1 / 72.1).abs() < 1e-12);
        assert!((ict_share(&shares) - 0.2372).abs() < 1e-4);
    }

    #[test]
    fn single_category_gets_everything() {
        let mut values: BTreeMap<_, _> = AssetCategory::ALL.iter().map(|&a| (a, 0.0)).collect();
        values.insert(Transport, 10.0);
        let shares = gfcf_shares(&values, GfcfScope::TotalNonResidential).unwrap();
        assert_eq!(shares[&Transport], 1.0);
    }

    #[test]
    fn all_zero_denominator() {
        let values: BTreeMap<_, _> = [(NonResidentialStructures, 3.0), (Software, 0.0)].into();
        assert!(gfcf_shares(&values, GfcfScope::TotalEquipment).is_err());
        assert!(gfcf_shares(&BTreeMap::new(), GfcfScope::TotalNonResidential).is_err());
    }

    #[test]
    fn flow_file_sets_software_aside() {
        let text = "country,asset,year,Q,E_d,M,E_r\n\
                    EU,OC,2000,100,20,50,10\n\
                    EU,SW,2000,30,0,0,0\n\
                    EU,OC,2001,110,25,55,10\n";
        let table = parse_flows(text).unwrap();
        assert_eq!(table.inputs.len(), 1);
        assert_eq!(
            table.refused,
            vec![RefusedRow {
                line: 3,
                country: "EU".into(),
                year: 2000
            }]
        );
        assert_eq!(
            table.inputs[&("EU".into(), OfficeComputer)].years().count(),
            2
        );
    }

    #[test]
    fn flow_file_rejects_duplicates_and_unknown_columns() {
        let dup = "country,asset,year,Q,E_d,M,E_r\nEU,OC,2000,1,0,1,0\nEU,OC,2000,2,0,1,0\n";
        assert!(matches!(
            parse_flows(dup),
            Err(Error::DuplicateCell { line: 3, .. })
        ));
        let extra = "country,asset,year,Q,E_d,M,E_r,note\n";
        assert!(matches!(
            parse_flows(extra),
            Err(Error::UnknownColumn { .. })
        ));
    }
}
