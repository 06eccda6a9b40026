//! Batch front end: argument parsing, the five subcommands, and rendering.
//!
//! Every command is a plain function from a [`RunConfig`] to a result record,
//! so the binary stays a one-liner and the commands can be driven from code.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::commodity_flow::{
    estimate_investment, gfcf_shares, ict_share, parse_flows, parse_gfcf, parse_io_ratios,
    GfcfScope, FLOWS_FILE, GFCF_FILE, IO_RATIOS_FILE,
};
use crate::dataset::{
    parse_bundle, read_text, validate, AssetCategory, ClassificationConfig, EconomyDataset,
    ValidationReport, Year, CLASSIFICATION_FILE, SERIES_FILE, SHARES_FILE, TFP_FILE,
};
use crate::domar::domar_for_dataset;
use crate::error::{Error, Result};
use crate::growth_accounting::{
    decompose_basic, decompose_detailed, ict_contribution, Decomposition, DetailedDecomposition,
    IctContribution, Mode,
};
use crate::report::{canonical_digest, csv_number, to_deterministic_json, write_atomic};

pub const TOOL_NAME: &str = "tfp-accounts";

#[derive(Debug, Parser)]
#[command(name = TOOL_NAME, version, about = "Growth accounting, commodity-flow investment and Domar aggregation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a bundle against every dataset rule.
    Validate(CommonArgs),
    /// Decompose output growth into capital, labor and TFP contributions.
    Decompose(CommonArgs),
    /// Estimate investment by asset with the commodity-flow method.
    Invest(CommonArgs),
    /// Aggregate industry TFP with Domar weights.
    Domar(CommonArgs),
    /// Period-average summary tables.
    Report(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Bundle directory.
    #[arg(long)]
    pub input: PathBuf,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Comma-separated country filter.
    #[arg(long, value_delimiter = ',')]
    pub countries: Vec<String>,
    /// Inclusive year range `A:B`.
    #[arg(long, value_parser = parse_year_range)]
    pub years: Option<(Year, Year)>,
    #[arg(long, value_enum, default_value_t = ModeArg::Levels)]
    pub mode: ModeArg,
    /// Render growth contributions in percent instead of log points.
    #[arg(long)]
    pub percent: bool,
    /// Classification config; defaults to classification.toml in the bundle.
    #[arg(long)]
    pub classification: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Levels,
    PerWorker,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Levels => Mode::Levels,
            ModeArg::PerWorker => Mode::PerWorker,
        }
    }
}

fn parse_year_range(s: &str) -> std::result::Result<(Year, Year), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected A:B, got {s:?}"))?;
    let a: Year = a
        .trim()
        .parse()
        .map_err(|_| format!("bad start year {a:?}"))?;
    let b: Year = b
        .trim()
        .parse()
        .map_err(|_| format!("bad end year {b:?}"))?;
    if a > b {
        return Err(format!("start year {a} is after end year {b}"));
    }
    Ok((a, b))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input_path: PathBuf,
    pub countries: Option<Vec<String>>,
    pub year_range: Option<(Year, Year)>,
    pub mode: Mode,
    pub output_path: Option<PathBuf>,
    pub format: Format,
    pub percent: bool,
    pub classification_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(input_path: impl Into<PathBuf>) -> Self {
        Self {
            input_path: input_path.into(),
            countries: None,
            year_range: None,
            mode: Mode::Levels,
            output_path: None,
            format: Format::Json,
            percent: false,
            classification_path: None,
        }
    }

    pub fn with_years(mut self, start: Year, end: Year) -> Self {
        self.year_range = Some((start, end));
        self
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_countries<S: Into<String>>(
        mut self,
        countries: impl IntoIterator<Item = S>,
    ) -> Self {
        self.countries = Some(countries.into_iter().map(Into::into).collect());
        self
    }

    fn in_range(&self, year: Year) -> bool {
        self.year_range.is_none_or(|(a, b)| (a..=b).contains(&year))
    }

    fn file(&self, name: &str) -> PathBuf {
        self.input_path.join(name)
    }
}

impl TryFrom<CommonArgs> for RunConfig {
    type Error = Error;

    fn try_from(args: CommonArgs) -> Result<Self> {
        if let Some((a, b)) = args.years {
            if a > b {
                return Err(Error::Usage(format!("year range {a}:{b} is empty")));
            }
        }
        Ok(Self {
            input_path: args.input,
            countries: (!args.countries.is_empty()).then_some(args.countries),
            year_range: args.years,
            mode: args.mode.into(),
            output_path: args.output,
            format: args.format,
            percent: args.percent,
            classification_path: args.classification,
        })
    }
}

// ---------------------------------------------------------------------------
// Input handling

/// Reads input files and records their digests.
#[derive(Default)]
struct Inputs {
    digests: BTreeMap<String, String>,
}

impl Inputs {
    fn read(&mut self, config: &RunConfig, name: &str) -> Result<String> {
        let text = read_text(&config.file(name))?;
        self.digests
            .insert(name.to_string(), canonical_digest(&text));
        Ok(text)
    }

    fn read_optional(&mut self, config: &RunConfig, name: &str) -> Result<Option<String>> {
        if config.file(name).exists() {
            self.read(config, name).map(Some)
        } else {
            Ok(None)
        }
    }

    fn classification(&mut self, config: &RunConfig) -> Result<ClassificationConfig> {
        let path = match &config.classification_path {
            Some(p) => p.clone(),
            None => {
                let default = config.file(CLASSIFICATION_FILE);
                if !default.exists() {
                    return Ok(ClassificationConfig::default());
                }
                default
            }
        };
        let text = read_text(&path)?;
        self.digests.insert(
            CLASSIFICATION_FILE.to_string(),
            hex::encode(<sha2::Sha256 as sha2::Digest>::digest(text.as_bytes())),
        );
        toml::from_str(&text).map_err(|e| Error::Config {
            path,
            message: e.to_string(),
        })
    }

    fn economies(&mut self, config: &RunConfig) -> Result<BTreeMap<String, EconomyDataset>> {
        ensure_input(config)?;
        let classification = self.classification(config)?;
        let series = self.read(config, SERIES_FILE)?;
        let shares = self.read(config, SHARES_FILE)?;
        let tfp = self.read_optional(config, TFP_FILE)?;
        let all = parse_bundle(&series, &shares, tfp.as_deref(), &classification)?;
        select_countries(config, all)
    }
}

fn ensure_input(config: &RunConfig) -> Result<()> {
    if config.input_path.is_dir() {
        Ok(())
    } else {
        Err(Error::InputNotFound(config.input_path.clone()))
    }
}

fn select_countries<T>(
    config: &RunConfig,
    all: BTreeMap<String, T>,
) -> Result<BTreeMap<String, T>> {
    let Some(wanted) = &config.countries else {
        return Ok(all);
    };
    if let Some(missing) = wanted.iter().find(|c| !all.contains_key(*c)) {
        return Err(Error::UnknownCountry(missing.clone()));
    }
    Ok(all
        .into_iter()
        .filter(|(c, _)| wanted.contains(c))
        .collect())
}

fn growth_years(config: &RunConfig, dataset: &EconomyDataset) -> Vec<Year> {
    dataset
        .growth_years()
        .into_iter()
        .filter(|&y| config.in_range(y))
        .collect()
}

fn validation_error(reports: &BTreeMap<String, ValidationReport>) -> Option<Error> {
    let errors: usize = reports.values().map(|r| r.errors.len()).sum();
    (errors > 0).then(|| Error::Validation {
        errors,
        details: render_validation(reports).trim_end().to_string(),
    })
}

// ---------------------------------------------------------------------------
// validate

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationOutcome {
    pub reports: BTreeMap<String, ValidationReport>,
}

impl ValidationOutcome {
    pub fn error_count(&self) -> usize {
        self.reports.values().map(|r| r.errors.len()).sum()
    }

    pub fn warning_count(&self) -> usize {
        self.reports.values().map(|r| r.warnings.len()).sum()
    }

    pub fn exit_code(&self) -> i32 {
        i32::from(self.error_count() > 0)
    }
}

pub fn cmd_validate(config: &RunConfig) -> Result<ValidationOutcome> {
    let economies = Inputs::default().economies(config)?;
    Ok(ValidationOutcome {
        reports: economies
            .iter()
            .map(|(c, ds)| (c.clone(), validate(ds)))
            .collect(),
    })
}

pub fn render_validation(reports: &BTreeMap<String, ValidationReport>) -> String {
    let mut out = String::new();
    let (mut errors, mut warnings) = (0, 0);
    for (country, report) in reports {
        for issue in &report.errors {
            out.push_str(&format!("error: {country}: {issue}\n"));
        }
        for issue in &report.warnings {
            out.push_str(&format!("warning: {country}: {issue}\n"));
        }
        errors += report.errors.len();
        warnings += report.warnings.len();
    }
    out.push_str(&format!("{errors} errors, {warnings} warnings\n"));
    out
}

// ---------------------------------------------------------------------------
// decompose

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

impl Default for ToolInfo {
    fn default() -> Self {
        Self {
            name: TOOL_NAME,
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CountryDecomposition {
    pub decompositions: Vec<Decomposition>,
    pub detailed: Vec<DetailedDecomposition>,
    pub ict_contributions: Vec<IctContribution>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationSummary {
    pub errors: usize,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub tool: ToolInfo,
    pub mode: Mode,
    pub input_digests: BTreeMap<String, String>,
    pub validation: BTreeMap<String, ValidationSummary>,
    pub countries: BTreeMap<String, CountryDecomposition>,
}

pub fn cmd_decompose(config: &RunConfig) -> Result<RunReport> {
    let mut inputs = Inputs::default();
    let economies = inputs.economies(config)?;
    let reports: BTreeMap<_, _> = economies
        .iter()
        .map(|(c, ds)| (c.clone(), validate(ds)))
        .collect();
    if let Some(err) = validation_error(&reports) {
        return Err(err);
    }

    let mut countries = BTreeMap::new();
    for (country, ds) in &economies {
        let mut records = CountryDecomposition::default();
        let detailed = ds.shares.has_asset_detail();
        for t in growth_years(config, ds) {
            records
                .decompositions
                .push(decompose_basic(ds, t, config.mode)?);
            if detailed {
                records
                    .detailed
                    .push(decompose_detailed(ds, t, config.mode)?);
                records.ict_contributions.push(ict_contribution(ds, t)?);
            }
        }
        countries.insert(country.clone(), records);
    }

    Ok(RunReport {
        tool: ToolInfo::default(),
        mode: config.mode,
        input_digests: inputs.digests,
        validation: reports
            .into_iter()
            .map(|(c, r)| {
                let summary = ValidationSummary {
                    errors: r.errors.len(),
                    warnings: r.warnings.iter().map(ToString::to_string).collect(),
                };
                (c, summary)
            })
            .collect(),
        countries,
    })
}

// ---------------------------------------------------------------------------
// invest

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvestmentRow {
    pub country: String,
    pub asset: AssetCategory,
    pub year: Year,
    pub domestic_component: f64,
    pub import_component: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvestOutput {
    pub rows: Vec<InvestmentRow>,
    pub warnings: Vec<String>,
    pub input_digests: BTreeMap<String, String>,
}

pub fn cmd_invest(config: &RunConfig) -> Result<InvestOutput> {
    ensure_input(config)?;
    let mut inputs = Inputs::default();
    let flows = parse_flows(&inputs.read(config, FLOWS_FILE)?)?;
    let ratios = parse_io_ratios(&inputs.read(config, IO_RATIOS_FILE)?)?;
    let wanted = |country: &str| {
        config
            .countries
            .as_ref()
            .is_none_or(|list| list.iter().any(|c| c == country))
    };

    let warnings = flows
        .refused
        .iter()
        .filter(|r| wanted(&r.country) && config.in_range(r.year))
        .map(|r| {
            format!(
                "{FLOWS_FILE} line {}: commodity flow not applicable to software ({} {}); row skipped",
                r.line, r.country, r.year
            )
        })
        .collect();

    let mut rows = Vec::new();
    for ((country, asset), item_flows) in &flows.inputs {
        if !wanted(country) {
            continue;
        }
        let item_ratios = ratios.get(&(country.clone(), *asset)).ok_or_else(|| {
            Error::InvalidFlows(format!("no I/O allocation ratios for {country} {asset}"))
        })?;
        for year in item_flows.years().filter(|&y| config.in_range(y)) {
            let est = estimate_investment(item_flows, item_ratios, year)?;
            rows.push(InvestmentRow {
                country: country.clone(),
                asset: *asset,
                year,
                domestic_component: est.domestic_component,
                import_component: est.import_component,
                total: est.total,
            });
        }
    }
    Ok(InvestOutput {
        rows,
        warnings,
        input_digests: inputs.digests,
    })
}

// ---------------------------------------------------------------------------
// domar

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DomarRow {
    pub country: String,
    pub year: Year,
    pub aggregate_tfp: f64,
    pub ict_producer_contribution: f64,
    pub non_ict_contribution: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightRow {
    pub country: String,
    pub year: Year,
    pub industry: String,
    pub weight: f64,
    pub tfp_growth: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DomarOutput {
    pub rows: Vec<DomarRow>,
    pub weights: Vec<WeightRow>,
    pub warnings: Vec<String>,
    pub input_digests: BTreeMap<String, String>,
}

pub fn cmd_domar(config: &RunConfig) -> Result<DomarOutput> {
    let mut inputs = Inputs::default();
    let economies = inputs.economies(config)?;
    let mut out = DomarOutput {
        rows: Vec::new(),
        weights: Vec::new(),
        warnings: Vec::new(),
        input_digests: BTreeMap::new(),
    };
    for (country, ds) in &economies {
        if ds.output.is_empty() {
            return Err(Error::MissingGdp(country.clone()));
        }
        if ds.industries.is_empty() {
            return Err(Error::InvalidFlows(format!(
                "{country} has no industry accounts"
            )));
        }
        for t in growth_years(config, ds) {
            let result = domar_for_dataset(ds, t)?;
            for (id, w) in result.oversized_weights() {
                out.warnings.push(format!(
                    "{country} {t}: Domar weight of {id} is {w:.4} (> 1); gross output exceeds GDP"
                ));
            }
            out.rows.push(DomarRow {
                country: country.clone(),
                year: t,
                aggregate_tfp: result.aggregate,
                ict_producer_contribution: result.ict_producer_contribution,
                non_ict_contribution: result.non_ict_contribution,
            });
            for (id, &weight) in &result.weights {
                out.weights.push(WeightRow {
                    country: country.clone(),
                    year: t,
                    industry: id.clone(),
                    weight,
                    tfp_growth: result.tfp_growth[id],
                });
            }
        }
    }
    out.input_digests = inputs.digests;
    Ok(out)
}

// ---------------------------------------------------------------------------
// report

/// Period averages of a decomposition, one value per component.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct GrowthSummary {
    pub growth: f64,
    pub ict_capital: f64,
    pub non_ict_capital: f64,
    pub labor: f64,
    pub tfp: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct DomarSummary {
    pub aggregate_tfp: f64,
    pub ict_producer_contribution: f64,
    pub non_ict_contribution: f64,
    /// ICT producers' fraction of aggregate TFP growth; absent when the aggregate is zero.
    pub ict_producer_fraction: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GfcfSummary {
    pub year: Year,
    pub total_non_residential: BTreeMap<AssetCategory, f64>,
    pub total_equipment: BTreeMap<AssetCategory, f64>,
    pub ict_share_non_residential: f64,
    pub ict_share_equipment: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CountrySummary {
    pub first_year: Option<Year>,
    pub last_year: Option<Year>,
    /// Output growth by source.
    pub output: Option<GrowthSummary>,
    /// Labor productivity growth by source.
    pub labor_productivity: Option<GrowthSummary>,
    pub ict_contribution: Option<f64>,
    pub domar: Option<DomarSummary>,
    pub gfcf: Vec<GfcfSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryReport {
    pub tool: ToolInfo,
    pub input_digests: BTreeMap<String, String>,
    pub countries: BTreeMap<String, CountrySummary>,
}

fn mean(values: impl IntoIterator<Item = f64>) -> f64 {
    let (sum, n) = values
        .into_iter()
        .fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

fn summarize(records: &[DetailedDecomposition]) -> Option<GrowthSummary> {
    (!records.is_empty()).then(|| GrowthSummary {
        growth: mean(records.iter().map(|d| d.output_growth)),
        ict_capital: mean(records.iter().map(DetailedDecomposition::ict_capital)),
        non_ict_capital: mean(records.iter().map(DetailedDecomposition::non_ict_capital)),
        labor: mean(records.iter().map(|d| d.labor_contribution)),
        tfp: mean(records.iter().map(|d| d.tfp_residual)),
    })
}

pub fn cmd_report(config: &RunConfig) -> Result<SummaryReport> {
    let mut inputs = Inputs::default();
    let economies = inputs.economies(config)?;
    let reports: BTreeMap<_, _> = economies
        .iter()
        .map(|(c, ds)| (c.clone(), validate(ds)))
        .collect();
    if let Some(err) = validation_error(&reports) {
        return Err(err);
    }
    let gfcf = match inputs.read_optional(config, GFCF_FILE)? {
        Some(text) => parse_gfcf(&text)?,
        None => Default::default(),
    };

    let mut countries = BTreeMap::new();
    for (country, ds) in &economies {
        let years = growth_years(config, ds);
        let mut summary = CountrySummary {
            first_year: years.first().map(|y| y - 1),
            last_year: years.last().copied(),
            ..Default::default()
        };
        if ds.shares.has_asset_detail() {
            let levels = years
                .iter()
                .map(|&t| decompose_detailed(ds, t, Mode::Levels))
                .collect::<Result<Vec<_>>>()?;
            let per_worker = years
                .iter()
                .map(|&t| decompose_detailed(ds, t, Mode::PerWorker))
                .collect::<Result<Vec<_>>>()?;
            let ict = years
                .iter()
                .map(|&t| ict_contribution(ds, t).map(|c| c.total))
                .collect::<Result<Vec<_>>>()?;
            summary.output = summarize(&levels);
            summary.labor_productivity = summarize(&per_worker);
            summary.ict_contribution = (!ict.is_empty()).then(|| mean(ict));
        }
        let tfp_complete = !ds.industries.is_empty()
            && years
                .iter()
                .all(|t| ds.industries.values().all(|a| a.tfp_growth.contains_key(t)));
        if tfp_complete && !years.is_empty() {
            let results = years
                .iter()
                .map(|&t| domar_for_dataset(ds, t))
                .collect::<Result<Vec<_>>>()?;
            let aggregate = mean(results.iter().map(|r| r.aggregate));
            let ict = mean(results.iter().map(|r| r.ict_producer_contribution));
            summary.domar = Some(DomarSummary {
                aggregate_tfp: aggregate,
                ict_producer_contribution: ict,
                non_ict_contribution: mean(results.iter().map(|r| r.non_ict_contribution)),
                ict_producer_fraction: (aggregate != 0.0).then(|| ict / aggregate),
            });
        }
        for ((c, year), values) in &gfcf {
            if c != country || !config.in_range(*year) {
                continue;
            }
            let non_residential = gfcf_shares(values, GfcfScope::TotalNonResidential)?;
            let equipment = gfcf_shares(values, GfcfScope::TotalEquipment)?;
            summary.gfcf.push(GfcfSummary {
                year: *year,
                ict_share_non_residential: ict_share(&non_residential),
                ict_share_equipment: ict_share(&equipment),
                total_non_residential: non_residential,
                total_equipment: equipment,
            });
        }
        countries.insert(country.clone(), summary);
    }
    Ok(SummaryReport {
        tool: ToolInfo::default(),
        input_digests: inputs.digests,
        countries,
    })
}

// ---------------------------------------------------------------------------
// Percent rendering

/// Growth-rate fields are multiplied by 100; shares and weights are not.
trait Percent {
    fn to_percent(&mut self);
}

impl Percent for Decomposition {
    fn to_percent(&mut self) {
        for v in [
            &mut self.output_growth,
            &mut self.capital_contribution,
            &mut self.labor_contribution,
            &mut self.tfp_residual,
        ] {
            *v *= 100.0;
        }
    }
}

impl Percent for DetailedDecomposition {
    fn to_percent(&mut self) {
        for v in self
            .ict_asset_contributions
            .values_mut()
            .chain(self.non_ict_asset_contributions.values_mut())
        {
            *v *= 100.0;
        }
        self.output_growth *= 100.0;
        self.labor_contribution *= 100.0;
        self.tfp_residual *= 100.0;
    }
}

impl Percent for IctContribution {
    fn to_percent(&mut self) {
        self.asset_term *= 100.0;
        self.producer_tfp_term *= 100.0;
        self.total *= 100.0;
    }
}

impl Percent for RunReport {
    fn to_percent(&mut self) {
        for c in self.countries.values_mut() {
            c.decompositions.iter_mut().for_each(Percent::to_percent);
            c.detailed.iter_mut().for_each(Percent::to_percent);
            c.ict_contributions.iter_mut().for_each(Percent::to_percent);
        }
    }
}

impl Percent for DomarOutput {
    fn to_percent(&mut self) {
        for r in &mut self.rows {
            r.aggregate_tfp *= 100.0;
            r.ict_producer_contribution *= 100.0;
            r.non_ict_contribution *= 100.0;
        }
        for w in &mut self.weights {
            w.tfp_growth *= 100.0;
        }
    }
}

impl Percent for GrowthSummary {
    fn to_percent(&mut self) {
        self.growth *= 100.0;
        self.ict_capital *= 100.0;
        self.non_ict_capital *= 100.0;
        self.labor *= 100.0;
        self.tfp *= 100.0;
    }
}

impl Percent for SummaryReport {
    fn to_percent(&mut self) {
        for c in self.countries.values_mut() {
            c.output.iter_mut().for_each(Percent::to_percent);
            c.labor_productivity
                .iter_mut()
                .for_each(Percent::to_percent);
            if let Some(v) = &mut c.ict_contribution {
                *v *= 100.0;
            }
            if let Some(d) = &mut c.domar {
                d.aggregate_tfp *= 100.0;
                d.ict_producer_contribution *= 100.0;
                d.non_ict_contribution *= 100.0;
            }
        }
    }
}

fn percent_copy<T: Percent + Clone>(value: &T, percent: bool) -> T {
    let mut out = value.clone();
    if percent {
        out.to_percent();
    }
    out
}

// ---------------------------------------------------------------------------
// CSV rendering

fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(header).expect("in-memory write");
    for row in rows {
        writer.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("UTF-8")
}

pub fn render_decompose_csv(report: &RunReport, percent: bool) -> String {
    let report = percent_copy(report, percent);
    let mode = match report.mode {
        Mode::Levels => "levels",
        Mode::PerWorker => "per_worker",
    };
    let mut rows = Vec::new();
    let mut push = |country: &str, year: Year, record: &str, component: String, value: f64| {
        rows.push(vec![
            country.to_string(),
            year.to_string(),
            mode.to_string(),
            record.to_string(),
            component,
            csv_number(value),
        ]);
    };
    for (country, c) in &report.countries {
        for d in &c.decompositions {
            push(
                country,
                d.year,
                "basic",
                "output_growth".into(),
                d.output_growth,
            );
            push(
                country,
                d.year,
                "basic",
                "capital".into(),
                d.capital_contribution,
            );
            push(
                country,
                d.year,
                "basic",
                "labor".into(),
                d.labor_contribution,
            );
            push(
                country,
                d.year,
                "basic",
                "tfp_residual".into(),
                d.tfp_residual,
            );
        }
        for d in &c.detailed {
            push(
                country,
                d.year,
                "detailed",
                "output_growth".into(),
                d.output_growth,
            );
            for (asset, &v) in d
                .ict_asset_contributions
                .iter()
                .chain(&d.non_ict_asset_contributions)
            {
                push(country, d.year, "detailed", format!("capital_{asset}"), v);
            }
            push(
                country,
                d.year,
                "detailed",
                "labor".into(),
                d.labor_contribution,
            );
            push(
                country,
                d.year,
                "detailed",
                "tfp_residual".into(),
                d.tfp_residual,
            );
        }
        for i in &c.ict_contributions {
            push(country, i.year, "ict", "asset_term".into(), i.asset_term);
            push(
                country,
                i.year,
                "ict",
                "producer_tfp_term".into(),
                i.producer_tfp_term,
            );
            push(country, i.year, "ict", "total".into(), i.total);
        }
    }
    csv_table(
        &["country", "year", "mode", "record", "component", "value"],
        rows,
    )
}

pub fn render_invest_csv(output: &InvestOutput) -> String {
    csv_table(
        &[
            "country",
            "asset",
            "year",
            "domestic_component",
            "import_component",
            "total",
        ],
        output.rows.iter().map(|r| {
            vec![
                r.country.clone(),
                r.asset.to_string(),
                r.year.to_string(),
                csv_number(r.domestic_component),
                csv_number(r.import_component),
                csv_number(r.total),
            ]
        }),
    )
}

/// Per-year aggregate table and long-format weights table.
pub fn render_domar_csv(output: &DomarOutput, percent: bool) -> (String, String) {
    let output = percent_copy(output, percent);
    let main = csv_table(
        &[
            "country",
            "year",
            "aggregate_tfp",
            "ict_producer_contribution",
            "non_ict_contribution",
        ],
        output.rows.iter().map(|r| {
            vec![
                r.country.clone(),
                r.year.to_string(),
                csv_number(r.aggregate_tfp),
                csv_number(r.ict_producer_contribution),
                csv_number(r.non_ict_contribution),
            ]
        }),
    );
    let weights = csv_table(
        &["country", "year", "industry", "weight", "tfp_growth"],
        output.weights.iter().map(|w| {
            vec![
                w.country.clone(),
                w.year.to_string(),
                w.industry.clone(),
                csv_number(w.weight),
                csv_number(w.tfp_growth),
            ]
        }),
    );
    (main, weights)
}

pub fn render_report_csv(report: &SummaryReport, percent: bool) -> String {
    let report = percent_copy(report, percent);
    let mut rows = Vec::new();
    let mut push = |country: &str, table: &str, item: String, value: f64| {
        rows.push(vec![
            country.to_string(),
            table.to_string(),
            item,
            csv_number(value),
        ]);
    };
    for (country, c) in &report.countries {
        for (table, summary) in [
            ("output", &c.output),
            ("labor_productivity", &c.labor_productivity),
        ] {
            if let Some(s) = summary {
                push(country, table, "growth".into(), s.growth);
                push(country, table, "ict_capital".into(), s.ict_capital);
                push(country, table, "non_ict_capital".into(), s.non_ict_capital);
                push(country, table, "labor".into(), s.labor);
                push(country, table, "tfp".into(), s.tfp);
            }
        }
        if let Some(v) = c.ict_contribution {
            push(country, "ict_contribution", "total".into(), v);
        }
        if let Some(d) = &c.domar {
            push(country, "domar", "aggregate_tfp".into(), d.aggregate_tfp);
            push(
                country,
                "domar",
                "ict_producer_contribution".into(),
                d.ict_producer_contribution,
            );
            push(
                country,
                "domar",
                "non_ict_contribution".into(),
                d.non_ict_contribution,
            );
            if let Some(f) = d.ict_producer_fraction {
                push(country, "domar", "ict_producer_fraction".into(), f);
            }
        }
        for g in &c.gfcf {
            for (asset, &v) in &g.total_non_residential {
                push(
                    country,
                    "gfcf_non_residential",
                    format!("{}_{asset}", g.year),
                    v,
                );
            }
            push(
                country,
                "gfcf_non_residential",
                format!("{}_ICT", g.year),
                g.ict_share_non_residential,
            );
            for (asset, &v) in &g.total_equipment {
                push(country, "gfcf_equipment", format!("{}_{asset}", g.year), v);
            }
            push(
                country,
                "gfcf_equipment",
                format!("{}_ICT", g.year),
                g.ict_share_equipment,
            );
        }
    }
    csv_table(&["country", "table", "item", "value"], rows)
}

pub fn render_decompose_json(report: &RunReport, percent: bool) -> Result<String> {
    to_deterministic_json(&Rendered {
        units: units(percent),
        body: percent_copy(report, percent),
    })
}

pub fn render_domar_json(output: &DomarOutput, percent: bool) -> Result<String> {
    to_deterministic_json(&Rendered {
        units: units(percent),
        body: percent_copy(output, percent),
    })
}

pub fn render_report_json(report: &SummaryReport, percent: bool) -> Result<String> {
    to_deterministic_json(&Rendered {
        units: units(percent),
        body: percent_copy(report, percent),
    })
}

#[derive(Serialize)]
struct Rendered<T: Serialize> {
    units: &'static str,
    #[serde(flatten)]
    body: T,
}

fn units(percent: bool) -> &'static str {
    if percent {
        "percent"
    } else {
        "log_points"
    }
}

// ---------------------------------------------------------------------------
// Entry point

fn emit(config: &RunConfig, out: &mut dyn Write, content: &str) -> Result<()> {
    match &config.output_path {
        Some(path) => write_atomic(path, content.as_bytes()),
        None => out
            .write_all(content.as_bytes())
            .map_err(|source| Error::Io {
                path: PathBuf::from("<stdout>"),
                source,
            }),
    }
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let ext = path
        .extension()
        .map(|e| format!(".{}", e.to_string_lossy()))
        .unwrap_or_default();
    path.with_file_name(format!("{stem}.{suffix}{ext}"))
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let (Command::Validate(args)
    | Command::Decompose(args)
    | Command::Invest(args)
    | Command::Domar(args)
    | Command::Report(args)) = &command;
    let config = RunConfig::try_from(args.clone())?;
    let note = |err: &mut dyn Write, line: &str| {
        let _ = writeln!(err, "{line}");
    };

    match command {
        Command::Validate(_) => {
            let outcome = cmd_validate(&config)?;
            let listing = render_validation(&outcome.reports);
            match config.format {
                Format::Json => emit(&config, out, &to_deterministic_json(&outcome)?)?,
                Format::Csv => emit(&config, out, &listing)?,
            }
            if config.output_path.is_some() {
                let _ = write!(out, "{listing}");
            }
            Ok(outcome.exit_code())
        }
        Command::Decompose(_) => {
            let report = cmd_decompose(&config)?;
            for (country, v) in &report.validation {
                for w in &v.warnings {
                    note(err, &format!("warning: {country}: {w}"));
                }
            }
            let text = match config.format {
                Format::Json => render_decompose_json(&report, config.percent)?,
                Format::Csv => render_decompose_csv(&report, config.percent),
            };
            emit(&config, out, &text)?;
            Ok(0)
        }
        Command::Invest(_) => {
            let output = cmd_invest(&config)?;
            for w in &output.warnings {
                note(err, &format!("warning: {w}"));
            }
            let text = match config.format {
                Format::Json => to_deterministic_json(&output)?,
                Format::Csv => render_invest_csv(&output),
            };
            emit(&config, out, &text)?;
            Ok(0)
        }
        Command::Domar(_) => {
            let output = cmd_domar(&config)?;
            for w in &output.warnings {
                note(err, &format!("warning: {w}"));
            }
            match config.format {
                Format::Json => emit(&config, out, &render_domar_json(&output, config.percent)?)?,
                Format::Csv => {
                    let (main, weights) = render_domar_csv(&output, config.percent);
                    match &config.output_path {
                        Some(path) => {
                            write_atomic(&sibling(path, "weights"), weights.as_bytes())?;
                            write_atomic(path, main.as_bytes())?;
                        }
                        None => emit(&config, out, &format!("{main}\n{weights}"))?,
                    }
                }
            }
            Ok(0)
        }
        Command::Report(_) => {
            let report = cmd_report(&config)?;
            let text = match config.format {
                Format::Json => render_report_json(&report, config.percent)?,
                Format::Csv => render_report_csv(&report, config.percent),
            };
            emit(&config, out, &text)?;
            Ok(0)
        }
    }
}

/// Parses `args` and runs the command, returning the process exit status:
/// 0 on success, 1 for data or validation errors, 2 for usage or I/O errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{rendered}")
            } else {
                write!(out, "{rendered}")
            };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn year_range_parsing() {
        assert_eq!(parse_year_range("1996:1998"), Ok((1996, 1998)));
        assert_eq!(parse_year_range("1997:1997"), Ok((1997, 1997)));
        assert!(parse_year_range("1998:1996").is_err());
        assert!(parse_year_range("1996").is_err());
    }

    #[test]
    fn flags_map_onto_run_config() {
        let cli = Cli::try_parse_from([
            "tfp-accounts",
            "decompose",
            "--input",
            "bundle",
            "--countries",
            "DE,NL",
            "--years",
            "1996:1999",
            "--mode",
            "per-worker",
            "--format",
            "json",
            "--percent",
        ])
        .unwrap();
        let Command::Decompose(args) = cli.command else {
            panic!("wrong subcommand");
        };
        let config = RunConfig::try_from(args).unwrap();
        assert_eq!(
            config.countries,
            Some(vec!["DE".to_string(), "NL".to_string()])
        );
        assert_eq!(config.year_range, Some((1996, 1999)));
        assert_eq!(config.mode, Mode::PerWorker);
        assert_eq!(config.format, Format::Json);
        assert!(config.percent);
    }

    #[test]
    fn sibling_path() {
        assert_eq!(
            sibling(Path::new("out/domar.csv"), "weights"),
            PathBuf::from("out/domar.weights.csv")
        );
    }

    #[test]
    fn usage_errors_exit_with_two() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["tfp-accounts", "frobnicate"], &mut out, &mut err), 2);
        assert_eq!(
            run(
                [
                    "tfp-accounts",
                    "decompose",
                    "--input",
                    "x",
                    "--years",
                    "5:1"
                ],
                &mut out,
                &mut err
            ),
            2
        );
    }
}
