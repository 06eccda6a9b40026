//! Domain model for one economy, the CSV bundle loader, validation, and the
//! growth-rate and share-averaging primitives every other module builds on.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::RangeInclusive;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Year = i32;

/// Absolute tolerance for share closure (`v_k + v_l = 1`, assets summing to `v_k`).
pub const SHARE_TOLERANCE: f64 = 1e-6;

/// The six investment asset categories; the first three are ICT capital.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AssetCategory {
    OfficeComputer,
    Communication,
    Software,
    OtherEquipment,
    Transport,
    NonResidentialStructures,
}

impl AssetCategory {
    pub const ALL: [AssetCategory; 6] = [
        AssetCategory::OfficeComputer,
        AssetCategory::Communication,
        AssetCategory::Software,
        AssetCategory::OtherEquipment,
        AssetCategory::Transport,
        AssetCategory::NonResidentialStructures,
    ];

    pub const fn is_ict(self) -> bool {
        matches!(
            self,
            AssetCategory::OfficeComputer | AssetCategory::Communication | AssetCategory::Software
        )
    }

    /// Software is measured directly; it cannot be traced through production
    /// and trade flows.
    pub const fn commodity_flow_eligible(self) -> bool {
        !matches!(self, AssetCategory::Software)
    }

    pub const fn code(self) -> &'static str {
        match self {
            AssetCategory::OfficeComputer => "OC",
            AssetCategory::Communication => "CM",
            AssetCategory::Software => "SW",
            AssetCategory::OtherEquipment => "OE",
            AssetCategory::Transport => "TR",
            AssetCategory::NonResidentialStructures => "NRS",
        }
    }

    pub fn ict() -> impl Iterator<Item = AssetCategory> {
        Self::ALL.into_iter().filter(|a| a.is_ict())
    }

    pub fn non_ict() -> impl Iterator<Item = AssetCategory> {
        Self::ALL.into_iter().filter(|a| !a.is_ict())
    }
}

impl fmt::Display for AssetCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.code())
    }
}

impl FromStr for AssetCategory {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Self::ALL.into_iter().find(|a| a.code() == s).ok_or(())
    }
}

impl Serialize for AssetCategory {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.code())
    }
}

/// Yearly observations of one variable.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AnnualSeries {
    values: BTreeMap<Year, f64>,
}

impl AnnualSeries {
    pub fn new(values: BTreeMap<Year, f64>) -> Self {
        Self { values }
    }

    pub fn get(&self, year: Year) -> Option<f64> {
        self.values.get(&year).copied()
    }

    pub fn insert(&mut self, year: Year, value: f64) -> Option<f64> {
        self.values.insert(year, value)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Year, f64)> + '_ {
        self.values.iter().map(|(&y, &v)| (y, v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// First and last observed year.
    pub fn span(&self) -> Option<RangeInclusive<Year>> {
        let first = *self.values.keys().next()?;
        let last = *self.values.keys().next_back()?;
        Some(first..=last)
    }

    /// The first missing year inside the observed span, if any.
    pub fn first_gap(&self) -> Option<Year> {
        let first = *self.values.keys().next()?;
        (first..)
            .zip(self.values.keys())
            .find(|(expected, year)| expected != *year)
            .map(|(expected, _)| expected)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self::new(self.values.iter().map(|(&y, &v)| (y, v * factor)).collect())
    }
}

impl FromIterator<(Year, f64)> for AnnualSeries {
    fn from_iter<I: IntoIterator<Item = (Year, f64)>>(iter: I) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

/// Value shares observed in one year.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct YearShares {
    /// Capital share of gross value added.
    pub v_k: f64,
    /// Labor share of gross value added.
    pub v_l: f64,
    /// ICT asset shares of gross value added.
    pub v_c: BTreeMap<AssetCategory, f64>,
    /// Non-ICT asset shares of gross value added.
    pub v_n: BTreeMap<AssetCategory, f64>,
    /// Output-share weights of ICT-producing industries, keyed by industry id.
    pub u_c: BTreeMap<String, f64>,
}

impl YearShares {
    pub fn asset_share(&self, asset: AssetCategory) -> Option<f64> {
        if asset.is_ict() {
            self.v_c.get(&asset).copied()
        } else {
            self.v_n.get(&asset).copied()
        }
    }

    pub fn has_asset_detail(&self) -> bool {
        !self.v_c.is_empty() || !self.v_n.is_empty()
    }

    pub fn asset_sum(&self) -> f64 {
        self.v_c.values().sum::<f64>() + self.v_n.values().sum::<f64>()
    }

    /// Checks the closure rules that every decomposition relies on.
    pub fn check_closure(&self) -> std::result::Result<(), String> {
        for (name, v) in [("v_k", self.v_k), ("v_l", self.v_l)] {
            if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                return Err(format!("{name} = {} outside [0, 1]", fmt_num(v)));
            }
        }
        let sum = self.v_k + self.v_l;
        if (sum - 1.0).abs() > SHARE_TOLERANCE {
            return Err(format!("share sum {} ≠ 1", fmt_num(sum)));
        }
        for (asset, &v) in self.v_c.iter().chain(self.v_n.iter()) {
            if !v.is_finite() || v < 0.0 {
                return Err(format!("asset share {asset} = {} is negative", fmt_num(v)));
            }
        }
        if self.has_asset_detail() {
            let assets = self.asset_sum();
            if (assets - self.v_k).abs() > SHARE_TOLERANCE {
                return Err(format!(
                    "asset share sum {} ≠ v_k {}",
                    fmt_num(assets),
                    fmt_num(self.v_k)
                ));
            }
        }
        Ok(())
    }

    /// Proportional rescaling of sums that miss their target by no more than
    /// [`SHARE_TOLERANCE`]. Larger misses are left for validation to report.
    fn renormalize(&mut self) {
        let sum = self.v_k + self.v_l;
        if sum > 0.0 && (sum - 1.0).abs() <= SHARE_TOLERANCE {
            self.v_k /= sum;
            self.v_l /= sum;
        }
        let assets = self.asset_sum();
        if assets > 0.0 && (assets - self.v_k).abs() <= SHARE_TOLERANCE {
            let factor = self.v_k / assets;
            for v in self.v_c.values_mut().chain(self.v_n.values_mut()) {
                *v *= factor;
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct InputShares {
    pub by_year: BTreeMap<Year, YearShares>,
}

impl InputShares {
    pub fn get(&self, year: Year) -> Option<&YearShares> {
        self.by_year.get(&year)
    }

    pub fn has_asset_detail(&self) -> bool {
        self.by_year.values().any(YearShares::has_asset_detail)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct IndustryAccount {
    pub id: String,
    /// Gross output; the numerator of the industry's Domar weight.
    pub gross_output: AnnualSeries,
    /// Industry TFP growth in log points per year.
    pub tfp_growth: BTreeMap<Year, f64>,
}

/// Every time series and share table for one country.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EconomyDataset {
    pub country: String,
    /// Free-text unit of the labor series (hours, persons); never converted.
    pub labor_unit: Option<String>,
    /// Gross value added at constant prices; doubles as GDP for Domar weights.
    pub output: AnnualSeries,
    pub labor: AnnualSeries,
    pub capital_total: AnnualSeries,
    pub capital_by_asset: BTreeMap<AssetCategory, AnnualSeries>,
    pub shares: InputShares,
    pub industries: BTreeMap<String, IndustryAccount>,
    pub ict_producer_ids: BTreeSet<String>,
}

impl EconomyDataset {
    /// Years `t` for which `t - 1` is also observed in the output series.
    pub fn growth_years(&self) -> Vec<Year> {
        self.output
            .iter()
            .map(|(y, _)| y)
            .filter(|&y| self.output.get(y - 1).is_some())
            .collect()
    }

    /// Multiplies every monetary series (output, capital, gross output) by `factor`.
    pub fn rescale_monetary(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.output = self.output.scaled(factor);
        out.capital_total = self.capital_total.scaled(factor);
        for series in out.capital_by_asset.values_mut() {
            *series = series.scaled(factor);
        }
        for industry in out.industries.values_mut() {
            industry.gross_output = industry.gross_output.scaled(factor);
        }
        out
    }
}

/// Log growth `ln(value_t) - ln(value_{t-1})`.
pub fn growth_rate(series: &AnnualSeries, t: Year) -> Result<f64> {
    log_growth("series", series, t)
}

pub(crate) fn log_growth(name: &str, series: &AnnualSeries, t: Year) -> Result<f64> {
    let current = observed_positive(name, series, t)?;
    let previous = observed_positive(name, series, t - 1)?;
    Ok((current / previous).ln())
}

fn observed_positive(name: &str, series: &AnnualSeries, year: Year) -> Result<f64> {
    let value = series.get(year).ok_or_else(|| Error::MissingYear {
        series: name.to_string(),
        year,
    })?;
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonPositive {
            series: name.to_string(),
            year,
            value,
        })
    }
}

/// Two-period arithmetic mean of a share, the averaging used for every
/// weight in the decompositions.
pub fn two_period_share(share_t: f64, share_prev: f64) -> Result<f64> {
    for value in [share_t, share_prev] {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::InvalidShare { value });
        }
    }
    Ok(0.5 * (share_t + share_prev))
}

/// Formats a number for messages: at most ten decimals, trailing zeros trimmed.
pub(crate) fn fmt_num(v: f64) -> String {
    let s = format!("{v:.10}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

// ---------------------------------------------------------------------------
// Classification config

/// Industry classification read from a small TOML file:
///
/// ```toml
/// labor_unit = "hours worked"
///
/// [industries.C30_32]
/// ict_producer = true
/// ```
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassificationConfig {
    #[serde(default)]
    pub labor_unit: Option<String>,
    #[serde(default)]
    pub industries: BTreeMap<String, IndustryClass>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndustryClass {
    pub ict_producer: bool,
}

impl ClassificationConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = read_text(path)?;
        toml::from_str(&text).map_err(|e| Error::Config {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }

    pub fn ict_producers(&self) -> BTreeSet<String> {
        self.industries
            .iter()
            .filter(|(_, class)| class.ict_producer)
            .map(|(id, _)| id.clone())
            .collect()
    }
}

// ---------------------------------------------------------------------------
// CSV loading

pub const SERIES_FILE: &str = "series.csv";
pub const SHARES_FILE: &str = "shares.csv";
pub const TFP_FILE: &str = "tfp.csv";
pub const CLASSIFICATION_FILE: &str = "classification.toml";

pub(crate) fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| match source.kind() {
        std::io::ErrorKind::NotFound => Error::MissingFile(path.to_path_buf()),
        _ => Error::Io {
            path: path.to_path_buf(),
            source,
        },
    })
}

/// One parsed data row with access by column name.
pub(crate) struct Row<'a> {
    pub file: &'a str,
    pub line: u64,
    record: csv::StringRecord,
    columns: &'a BTreeMap<String, usize>,
}

impl Row<'_> {
    pub fn text(&self, column: &str) -> &str {
        self.columns
            .get(column)
            .and_then(|&i| self.record.get(i))
            .map(str::trim)
            .unwrap_or("")
    }

    pub fn required(&self, column: &str) -> Result<&str> {
        match self.text(column) {
            "" => Err(self.malformed(format!("empty `{column}`"))),
            s => Ok(s),
        }
    }

    pub fn number(&self, column: &str) -> Result<f64> {
        let raw = self.required(column)?;
        match raw.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(self.malformed(format!("`{column}` is not a number: {raw:?}"))),
        }
    }

    pub fn year(&self, column: &str) -> Result<Year> {
        let raw = self.required(column)?;
        raw.parse::<Year>()
            .map_err(|_| self.malformed(format!("`{column}` is not a year: {raw:?}")))
    }

    pub fn asset(&self, column: &str) -> Result<AssetCategory> {
        let raw = self.required(column)?;
        raw.parse().map_err(|_| Error::UnknownAsset {
            file: self.file.to_string(),
            line: self.line,
            code: raw.to_string(),
        })
    }

    pub fn malformed(&self, message: String) -> Error {
        Error::MalformedRow {
            file: self.file.to_string(),
            line: self.line,
            message,
        }
    }

    pub fn duplicate(&self, cell: String) -> Error {
        Error::DuplicateCell {
            file: self.file.to_string(),
            line: self.line,
            cell,
        }
    }
}

/// Parses a headed CSV text whose columns must be exactly `columns` (any order).
pub(crate) fn parse_table(
    file: &str,
    text: &str,
    columns: &[&str],
    mut on_row: impl FnMut(Row<'_>) -> Result<()>,
) -> Result<usize> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| malformed_csv(file, &e))?
        .clone();
    if headers.is_empty() || headers.iter().all(str::is_empty) {
        return Err(Error::NoObservations {
            file: file.to_string(),
        });
    }
    let mut index = BTreeMap::new();
    for (i, name) in headers.iter().enumerate() {
        if !columns.contains(&name) {
            return Err(Error::UnknownColumn {
                file: file.to_string(),
                column: name.to_string(),
            });
        }
        index.insert(name.to_string(), i);
    }
    if let Some(missing) = columns.iter().find(|c| !index.contains_key(**c)) {
        return Err(Error::MissingColumn {
            file: file.to_string(),
            column: missing.to_string(),
        });
    }
    let mut count = 0;
    for record in reader.records() {
        let record = record.map_err(|e| malformed_csv(file, &e))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let line = record.position().map_or(0, |p| p.line());
        on_row(Row {
            file,
            line,
            record,
            columns: &index,
        })?;
        count += 1;
    }
    Ok(count)
}

fn malformed_csv(file: &str, err: &csv::Error) -> Error {
    Error::MalformedRow {
        file: file.to_string(),
        line: err.position().map_or(0, |p| p.line()),
        message: err.to_string(),
    }
}

const SERIES_COLUMNS: [&str; 6] = ["country", "variable", "asset", "industry", "year", "value"];
const SHARES_COLUMNS: [&str; 6] = [
    "country",
    "year",
    "share_kind",
    "asset",
    "industry",
    "value",
];
const TFP_COLUMNS: [&str; 4] = ["country", "industry", "year", "tfp_growth"];

/// Loads the bundle in `dir` and returns its only country.
pub fn load_economy(dir: &Path, config: &ClassificationConfig) -> Result<EconomyDataset> {
    let mut all = load_bundle(dir, config)?;
    if all.len() != 1 {
        return Err(Error::AmbiguousCountry(all.len()));
    }
    Ok(all.pop_first().map(|(_, ds)| ds).expect("one country"))
}

/// Loads every country in the bundle at `dir`.
pub fn load_bundle(
    dir: &Path,
    config: &ClassificationConfig,
) -> Result<BTreeMap<String, EconomyDataset>> {
    if !dir.is_dir() {
        return Err(Error::InputNotFound(dir.to_path_buf()));
    }
    let series = read_text(&dir.join(SERIES_FILE))?;
    let shares = read_text(&dir.join(SHARES_FILE))?;
    let tfp_path = dir.join(TFP_FILE);
    let tfp = if tfp_path.exists() {
        Some(read_text(&tfp_path)?)
    } else {
        None
    };
    parse_bundle(&series, &shares, tfp.as_deref(), config)
}

/// Builds datasets from in-memory file contents; `load_bundle` without the filesystem.
pub fn parse_bundle(
    series_csv: &str,
    shares_csv: &str,
    tfp_csv: Option<&str>,
    config: &ClassificationConfig,
) -> Result<BTreeMap<String, EconomyDataset>> {
    let mut economies: BTreeMap<String, EconomyDataset> = BTreeMap::new();
    let entry = |economies: &mut BTreeMap<String, EconomyDataset>, country: &str| {
        economies
            .entry(country.to_string())
            .or_insert_with(|| EconomyDataset {
                country: country.to_string(),
                labor_unit: config.labor_unit.clone(),
                ict_producer_ids: config.ict_producers(),
                ..Default::default()
            })
            .country
            .clone()
    };

    let rows = parse_table(SERIES_FILE, series_csv, &SERIES_COLUMNS, |row| {
        let country = row.required("country")?.to_string();
        entry(&mut economies, &country);
        let ds = economies.get_mut(&country).expect("inserted");
        let variable = row.required("variable")?;
        let year = row.year("year")?;
        let value = row.number("value")?;
        let asset = row.text("asset");
        let industry = row.text("industry");
        let expect_blank = |column: &str, v: &str| -> Result<()> {
            if v.is_empty() {
                Ok(())
            } else {
                Err(row.malformed(format!("`{column}` must be empty for variable {variable}")))
            }
        };
        let (series, cell) = match variable {
            "output" | "labor" | "capital_total" => {
                expect_blank("asset", asset)?;
                expect_blank("industry", industry)?;
                let series = match variable {
                    "output" => &mut ds.output,
                    "labor" => &mut ds.labor,
                    _ => &mut ds.capital_total,
                };
                (series, format!("({year}, {variable})"))
            }
            "capital_asset" => {
                expect_blank("industry", industry)?;
                let code = row.asset("asset")?;
                (
                    ds.capital_by_asset.entry(code).or_default(),
                    format!("({year}, capital_asset {code})"),
                )
            }
            "gross_output" => {
                expect_blank("asset", asset)?;
                let id = row.required("industry")?.to_string();
                let account = ds
                    .industries
                    .entry(id.clone())
                    .or_insert_with(|| IndustryAccount {
                        id: id.clone(),
                        ..Default::default()
                    });
                (
                    &mut account.gross_output,
                    format!("({year}, gross_output {id})"),
                )
            }
            other => return Err(row.malformed(format!("unknown variable `{other}`"))),
        };
        if series.insert(year, value).is_some() {
            return Err(row.duplicate(format!("{country} {cell}")));
        }
        Ok(())
    })?;
    if rows == 0 {
        return Err(Error::NoObservations {
            file: SERIES_FILE.to_string(),
        });
    }

    let mut seen_kl: BTreeSet<(String, Year, &'static str)> = BTreeSet::new();
    let rows = parse_table(SHARES_FILE, shares_csv, &SHARES_COLUMNS, |row| {
        let country = row.required("country")?.to_string();
        entry(&mut economies, &country);
        let ds = economies.get_mut(&country).expect("inserted");
        let year = row.year("year")?;
        let kind = row.required("share_kind")?;
        let value = row.number("value")?;
        let shares = ds.shares.by_year.entry(year).or_default();
        let duplicate = match kind {
            "v_k" | "v_l" => {
                let kind: &'static str = if kind == "v_k" { "v_k" } else { "v_l" };
                if kind == "v_k" {
                    shares.v_k = value;
                } else {
                    shares.v_l = value;
                }
                !seen_kl.insert((country.clone(), year, kind))
            }
            "v_c" | "v_n" => {
                let asset = row.asset("asset")?;
                if asset.is_ict() != (kind == "v_c") {
                    return Err(row.malformed(format!(
                        "asset {asset} is {} and cannot carry share kind {kind}",
                        if asset.is_ict() { "ICT" } else { "non-ICT" }
                    )));
                }
                let map = if kind == "v_c" {
                    &mut shares.v_c
                } else {
                    &mut shares.v_n
                };
                map.insert(asset, value).is_some()
            }
            "u_c" => {
                let id = row.required("industry")?.to_string();
                shares.u_c.insert(id, value).is_some()
            }
            other => return Err(row.malformed(format!("unknown share_kind `{other}`"))),
        };
        if duplicate {
            return Err(row.duplicate(format!("{country} ({year}, {kind})")));
        }
        Ok(())
    })?;
    if rows == 0 {
        return Err(Error::NoObservations {
            file: SHARES_FILE.to_string(),
        });
    }
    for (country, ds) in &mut economies {
        for (&year, shares) in &mut ds.shares.by_year {
            for kind in ["v_k", "v_l"] {
                if !seen_kl.contains(&(country.clone(), year, kind)) {
                    return Err(Error::InvalidShares {
                        year,
                        message: format!("{country} has no {kind}"),
                    });
                }
            }
            shares.renormalize();
        }
    }

    if let Some(tfp_csv) = tfp_csv {
        parse_table(TFP_FILE, tfp_csv, &TFP_COLUMNS, |row| {
            let country = row.required("country")?;
            let id = row.required("industry")?;
            let year = row.year("year")?;
            let value = row.number("tfp_growth")?;
            let ds = economies
                .get_mut(country)
                .ok_or_else(|| row.malformed(format!("country `{country}` has no series")))?;
            let account = ds.industries.get_mut(id).ok_or_else(|| {
                row.malformed(format!("industry `{id}` has no gross_output series"))
            })?;
            if account.tfp_growth.insert(year, value).is_some() {
                return Err(row.duplicate(format!("{country} ({year}, tfp {id})")));
            }
            Ok(())
        })?;
    }

    for ds in economies.values() {
        let mut named: Vec<(String, &AnnualSeries)> = vec![
            ("output".into(), &ds.output),
            ("labor".into(), &ds.labor),
            ("capital_total".into(), &ds.capital_total),
        ];
        named.extend(
            ds.capital_by_asset
                .iter()
                .map(|(a, s)| (format!("capital_asset {a}"), s)),
        );
        named.extend(
            ds.industries
                .iter()
                .map(|(id, acc)| (format!("gross_output {id}"), &acc.gross_output)),
        );
        for (name, series) in named {
            if let Some(year) = series.first_gap() {
                return Err(Error::Gap { series: name, year });
            }
        }
    }
    Ok(economies)
}

// ---------------------------------------------------------------------------
// Validation

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Issue {
    pub location: String,
    pub rule: String,
    pub observed: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} (observed {})",
            self.location, self.rule, self.observed
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub errors: Vec<Issue>,
    pub warnings: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }

    fn error(
        &mut self,
        location: impl Into<String>,
        rule: impl Into<String>,
        observed: impl ToString,
    ) {
        self.errors.push(Issue {
            location: location.into(),
            rule: rule.into(),
            observed: observed.to_string(),
        });
    }

    fn warn(
        &mut self,
        location: impl Into<String>,
        rule: impl Into<String>,
        observed: impl ToString,
    ) {
        self.warnings.push(Issue {
            location: location.into(),
            rule: rule.into(),
            observed: observed.to_string(),
        });
    }

    pub fn summary(&self) -> String {
        format!(
            "{} errors, {} warnings",
            self.errors.len(),
            self.warnings.len()
        )
    }
}

/// Checks every dataset invariant; violations are returned as data.
pub fn validate(dataset: &EconomyDataset) -> ValidationReport {
    let mut report = ValidationReport::default();

    let mut named: Vec<(String, &AnnualSeries)> = vec![
        ("output".into(), &dataset.output),
        ("labor".into(), &dataset.labor),
        ("capital_total".into(), &dataset.capital_total),
    ];
    named.extend(
        dataset
            .capital_by_asset
            .iter()
            .map(|(a, s)| (format!("capital_asset {a}"), s)),
    );
    named.extend(
        dataset
            .industries
            .iter()
            .map(|(id, acc)| (format!("gross_output {id}"), &acc.gross_output)),
    );

    let reference = dataset.output.span();
    for (name, series) in &named {
        let Some(span) = series.span() else {
            report.error(name.as_str(), "series has no observations", "none");
            continue;
        };
        if let Some(year) = series.first_gap() {
            report.error(format!("{name} {year}"), "gap in series", "missing year");
        }
        for (year, value) in series.iter() {
            if !(value > 0.0 && value.is_finite()) {
                report.error(
                    format!("{name} {year}"),
                    "value must be positive",
                    fmt_num(value),
                );
            }
        }
        if let Some(reference) = &reference {
            if &span != reference {
                report.error(
                    name.as_str(),
                    format!(
                        "year range differs from output {}–{}",
                        reference.start(),
                        reference.end()
                    ),
                    format!("{}–{}", span.start(), span.end()),
                );
            }
        }
    }

    if let Some(span) = &reference {
        for year in span.clone() {
            if dataset.shares.get(year).is_none() {
                report.error(format!("shares {year}"), "no shares for year", "missing");
            }
        }
    }
    let detailed = dataset.shares.has_asset_detail();
    if !detailed {
        report.warn(
            "shares",
            "no asset shares; detailed decomposition unavailable",
            "none",
        );
    }
    let mut shared_assets = BTreeSet::new();
    for (&year, shares) in &dataset.shares.by_year {
        let location = format!("shares {year}");
        for (name, v) in [("v_k", shares.v_k), ("v_l", shares.v_l)] {
            if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                report.error(
                    location.as_str(),
                    format!("{name} outside [0, 1]"),
                    fmt_num(v),
                );
            }
        }
        let sum = shares.v_k + shares.v_l;
        if (sum - 1.0).abs() > SHARE_TOLERANCE {
            report.error(
                location.as_str(),
                format!("share sum {} ≠ 1", fmt_num(sum)),
                fmt_num(sum),
            );
        }
        for (&asset, &v) in shares.v_c.iter().chain(shares.v_n.iter()) {
            if asset.is_ict() != shares.v_c.contains_key(&asset) {
                report.error(
                    location.as_str(),
                    format!("asset {asset} filed under the wrong share kind"),
                    fmt_num(v),
                );
            }
            if !v.is_finite() || v < 0.0 {
                report.error(
                    location.as_str(),
                    format!("asset share {asset} negative"),
                    fmt_num(v),
                );
            }
            if v != 0.0 {
                shared_assets.insert(asset);
            }
        }
        if detailed {
            let assets = shares.asset_sum();
            if (assets - shares.v_k).abs() > SHARE_TOLERANCE {
                report.error(
                    location.as_str(),
                    format!(
                        "asset share sum {} ≠ v_k {}",
                        fmt_num(assets),
                        fmt_num(shares.v_k)
                    ),
                    fmt_num(assets),
                );
            }
        }
        for (id, &v) in &shares.u_c {
            if !v.is_finite() || v < 0.0 {
                report.error(
                    location.as_str(),
                    format!("u_c for {id} negative"),
                    fmt_num(v),
                );
            }
            if !dataset.ict_producer_ids.contains(id) {
                report.warn(
                    location.as_str(),
                    format!("u_c given for {id}, which is not an ICT producer"),
                    fmt_num(v),
                );
            }
        }
    }
    for asset in shared_assets {
        if !dataset.capital_by_asset.contains_key(&asset) {
            report.error(
                format!("capital_asset {asset}"),
                "asset has a share but no capital service series",
                "missing",
            );
        }
    }

    for id in &dataset.ict_producer_ids {
        if !dataset.industries.contains_key(id) {
            report.error(
                format!("industry {id}"),
                "ICT producer has no industry account",
                "missing",
            );
        }
    }
    let growth_years = dataset.growth_years();
    for (id, account) in &dataset.industries {
        for &year in &growth_years {
            if !account.tfp_growth.contains_key(&year) {
                report.warn(
                    format!("tfp {id} {year}"),
                    "no TFP growth; Domar aggregation unavailable for this year",
                    "missing",
                );
            }
        }
        for (year, gvo) in account.gross_output.iter() {
            if let Some(gdp) = dataset.output.get(year).filter(|g| *g > 0.0) {
                if gvo / gdp > 1.0 {
                    report.warn(
                        format!("gross_output {id} {year}"),
                        "gross output exceeds GDP; Domar weight above 1",
                        fmt_num(gvo / gdp),
                    );
                }
            }
        }
    }
    report
}
