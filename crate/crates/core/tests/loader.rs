use std::fs;

use tfp_accounts::commodity_flow::{load_flows, load_gfcf, load_io_ratios};
use tfp_accounts::{demo_bundle_path, load_economy, validate, AssetCategory, ClassificationConfig};

fn rows(file: &str) -> Vec<Vec<String>> {
    fs::read_to_string(demo_bundle_path().join(file))
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn config() -> ClassificationConfig {
    ClassificationConfig::from_path(&demo_bundle_path().join("classification.toml")).unwrap()
}

#[test]
fn demo_series_round_trip() {
    let ds = load_economy(&demo_bundle_path(), &config()).unwrap();
    assert_eq!(ds.country, "EU");
    assert_eq!(ds.output.span(), Some(1995..=2000));
    assert_eq!(ds.capital_by_asset.len(), 6);
    assert_eq!(ds.industries.len(), 2);
    assert_eq!(ds.ict_producer_ids.iter().collect::<Vec<_>>(), ["ICT_MFG"]);
    assert_eq!(ds.labor_unit.as_deref(), Some("hours worked (millions)"));

    let raw = rows("series.csv");
    for r in &raw {
        let (year, value): (i32, f64) = (r[4].parse().unwrap(), r[5].parse().unwrap());
        let loaded = match r[1].as_str() {
            "output" => ds.output.get(year),
            "labor" => ds.labor.get(year),
            "capital_total" => ds.capital_total.get(year),
            "capital_asset" => {
                ds.capital_by_asset[&r[2].parse::<AssetCategory>().unwrap()].get(year)
            }
            "gross_output" => ds.industries[&r[3]].gross_output.get(year),
            other => panic!("unexpected variable {other}"),
        };
        assert_eq!(loaded, Some(value), "{r:?}");
    }
    let loaded_cells: usize = [&ds.output, &ds.labor, &ds.capital_total]
        .into_iter()
        .chain(ds.capital_by_asset.values())
        .chain(ds.industries.values().map(|i| &i.gross_output))
        .map(|s| s.len())
        .sum();
    assert_eq!(loaded_cells, raw.len());
}

#[test]
fn demo_shares_and_tfp_round_trip() {
    let ds = load_economy(&demo_bundle_path(), &config()).unwrap();
    for r in rows("shares.csv") {
        let ys = ds.shares.get(r[1].parse().unwrap()).unwrap();
        let value: f64 = r[5].parse().unwrap();
        let loaded = match r[2].as_str() {
            "v_k" => ys.v_k,
            "v_l" => ys.v_l,
            "v_c" | "v_n" => ys.asset_share(r[3].parse().unwrap()).unwrap(),
            "u_c" => ys.u_c[&r[4]],
            other => panic!("unexpected share kind {other}"),
        };
        assert!((loaded - value).abs() <= 1e-6, "{r:?}");
    }
    for r in rows("tfp.csv") {
        let tfp = ds.industries[&r[1]].tfp_growth[&r[2].parse().unwrap()];
        assert_eq!(tfp, r[3].parse::<f64>().unwrap());
    }
    assert!(validate(&ds).is_ok());
}

#[test]
fn demo_flow_files_round_trip() {
    let flows = load_flows(&demo_bundle_path().join("flows.csv")).unwrap();
    assert!(flows.refused.is_empty());
    for r in rows("flows.csv") {
        let asset: AssetCategory = r[1].parse().unwrap();
        let f = flows.inputs[&(r[0].clone(), asset)]
            .get(r[2].parse().unwrap())
            .unwrap();
        let v: Vec<f64> = r[3..7].iter().map(|x| x.parse().unwrap()).collect();
        assert_eq!(
            [f.domestic_output, f.exports, f.imports, f.re_exports],
            v[..]
        );
    }

    let ratios = load_io_ratios(&demo_bundle_path().join("io_ratios.csv")).unwrap();
    assert_eq!(ratios.len(), rows("io_ratios.csv").len());
    for r in rows("io_ratios.csv") {
        let ratio = ratios[&(r[0].clone(), r[1].parse().unwrap())];
        assert_eq!(ratio.domestic_ratio, r[2].parse::<f64>().unwrap());
        assert_eq!(ratio.import_ratio, r[3].parse::<f64>().unwrap());
        assert_eq!(ratio.io_reference_year, r[4].parse::<i32>().unwrap());
    }

    let gfcf = load_gfcf(&demo_bundle_path().join("gfcf.csv")).unwrap();
    let eu = &gfcf[&("EU".to_string(), 2000)];
    assert_eq!(eu.len(), 6);
    assert_eq!(eu[&AssetCategory::Software], 7.1);
}
