//! Synthetic data and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use tfp_accounts::{
    AnnualSeries, AssetCategory, EconomyDataset, IndustryAccount, Year, YearShares,
};

pub const FIRST_YEAR: Year = 2000;

/// A random valid dataset: closed shares, positive series, asset detail,
/// capital_total built as the Törnqvist aggregate of the asset series, and a
/// few industries (some ICT producers) with TFP growth for every growth year.
pub fn random_dataset<R: Rng>(rng: &mut R) -> EconomyDataset {
    let n_years = rng.gen_range(3..=8);
    let years: Vec<Year> = (FIRST_YEAR..FIRST_YEAR + n_years).collect();

    let mut shares = BTreeMap::new();
    for &year in &years {
        let v_k: f64 = rng.gen_range(0.15..0.5);
        let raw: Vec<f64> = AssetCategory::ALL
            .iter()
            .map(|_| rng.gen_range(0.05..1.0))
            .collect();
        let total: f64 = raw.iter().sum();
        let mut ys = YearShares {
            v_k,
            v_l: 1.0 - v_k,
            ..Default::default()
        };
        for (asset, r) in AssetCategory::ALL.into_iter().zip(raw) {
            let v = v_k * r / total;
            if asset.is_ict() {
                ys.v_c.insert(asset, v);
            } else {
                ys.v_n.insert(asset, v);
            }
        }
        shares.insert(year, ys);
    }

    let walk = |rng: &mut R, start: f64, lo: f64, hi: f64| -> AnnualSeries {
        let mut level = start;
        years
            .iter()
            .map(|&y| {
                if y != FIRST_YEAR {
                    level *= rng.gen_range(lo..hi);
                }
                (y, level)
            })
            .collect()
    };

    let mut capital_by_asset = BTreeMap::new();
    for asset in AssetCategory::ALL {
        let start = rng.gen_range(10.0..500.0);
        capital_by_asset.insert(asset, walk(rng, start, 0.9, 1.35));
    }
    let capital_total = tornqvist_capital(&years, &capital_by_asset, &shares, 1000.0);
    let start = rng.gen_range(500.0..5000.0);
    let output = walk(rng, start, 0.95, 1.08);
    let start = rng.gen_range(100.0..1000.0);
    let labor = walk(rng, start, 0.97, 1.04);

    let n_industries = rng.gen_range(1..=4);
    let mut industries = BTreeMap::new();
    let mut producers = BTreeSet::new();
    for i in 0..n_industries {
        let id = format!("IND{i}");
        let gross_output: AnnualSeries = years
            .iter()
            .map(|&y| (y, output.get(y).unwrap() * rng.gen_range(0.05..0.9)))
            .collect();
        let tfp_growth = years[1..]
            .iter()
            .map(|&y| (y, rng.gen_range(-0.03..0.12)))
            .collect();
        if rng.gen_bool(0.4) {
            producers.insert(id.clone());
            if rng.gen_bool(0.5) {
                for ys in shares.values_mut() {
                    ys.u_c.insert(id.clone(), rng.gen_range(0.0..0.2));
                }
            }
        }
        industries.insert(
            id.clone(),
            IndustryAccount {
                id,
                gross_output,
                tfp_growth,
            },
        );
    }

    let mut ds = EconomyDataset {
        country: "SYN".into(),
        output,
        labor,
        capital_total,
        capital_by_asset,
        industries,
        ict_producer_ids: producers,
        ..Default::default()
    };
    ds.shares.by_year = shares;
    ds
}

/// `ln K_t - ln K_{t-1} = Σ_i (v̄_i / v̄_k) (ln k_{i,t} - ln k_{i,t-1})`, starting at `base`.
pub fn tornqvist_capital(
    years: &[Year],
    assets: &BTreeMap<AssetCategory, AnnualSeries>,
    shares: &BTreeMap<Year, YearShares>,
    base: f64,
) -> AnnualSeries {
    let mut level = base;
    let mut out = AnnualSeries::default();
    out.insert(years[0], level);
    for w in years.windows(2) {
        let (prev, cur) = (w[0], w[1]);
        let v_k = 0.5 * (shares[&cur].v_k + shares[&prev].v_k);
        let mut growth = 0.0;
        for (asset, series) in assets {
            let v = 0.5
                * (shares[&cur].asset_share(*asset).unwrap_or(0.0)
                    + shares[&prev].asset_share(*asset).unwrap_or(0.0));
            growth += v / v_k * (series.get(cur).unwrap() / series.get(prev).unwrap()).ln();
        }
        level *= growth.exp();
        out.insert(cur, level);
    }
    out
}

/// Gaussian elimination with partial pivoting for small dense systems.
pub fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            let (upper, lower) = a.split_at_mut(row);
            for (x, p) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *x -= f * p;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}

/// A three-industry closed economy with Cobb-Douglas gross-output
/// technologies and Cobb-Douglas final demand. Nominal flows keep fixed
/// proportions (all scaled by an inflation index), so every value share is
/// constant while quantities and prices move.
pub struct ClosedEconomy {
    /// `deliveries[j][i]`: intermediate purchases of industry `i` from industry `j`, base year.
    pub deliveries: [[f64; 3]; 3],
    pub capital_income: [f64; 3],
    pub labor_income: [f64; 3],
    /// Industry TFP growth per year, gross-output basis.
    pub tfp: BTreeMap<Year, [f64; 3]>,
    /// Growth of capital and labor input per industry per year.
    pub capital_growth: BTreeMap<Year, [f64; 3]>,
    pub labor_growth: BTreeMap<Year, [f64; 3]>,
    /// Nominal index applied to every flow.
    pub inflation: BTreeMap<Year, f64>,
}

impl ClosedEconomy {
    pub fn hand_built() -> Self {
        let years = [2001, 2002, 2003, 2004];
        let tfp = [
            [0.012, 0.004, 0.085],
            [0.010, -0.002, 0.110],
            [0.015, 0.006, 0.095],
            [0.008, 0.001, 0.120],
        ];
        let hk = [
            [0.030, 0.020, 0.150],
            [0.025, 0.015, 0.180],
            [0.020, 0.030, 0.120],
            [0.035, 0.010, 0.200],
        ];
        let hl = [
            [0.005, 0.010, 0.020],
            [-0.004, 0.012, 0.030],
            [0.000, 0.008, 0.010],
            [0.003, -0.002, 0.025],
        ];
        let inflation = [1.0, 1.021, 1.043, 1.060, 1.088];
        Self {
            // industries: 0 manufacturing, 1 services, 2 ICT production
            deliveries: [[120.0, 60.0, 25.0], [80.0, 150.0, 15.0], [20.0, 45.0, 10.0]],
            capital_income: [90.0, 160.0, 30.0],
            labor_income: [210.0, 380.0, 40.0],
            tfp: years.iter().copied().zip(tfp).collect(),
            capital_growth: years.iter().copied().zip(hk).collect(),
            labor_growth: years.iter().copied().zip(hl).collect(),
            inflation: (2000..).zip(inflation).collect(),
        }
    }

    /// Base-year gross output: intermediate purchases plus value added.
    pub fn gross_output(&self) -> [f64; 3] {
        std::array::from_fn(|i| {
            (0..3).map(|j| self.deliveries[j][i]).sum::<f64>()
                + self.capital_income[i]
                + self.labor_income[i]
        })
    }

    pub fn final_demand(&self) -> [f64; 3] {
        let x = self.gross_output();
        std::array::from_fn(|j| x[j] - self.deliveries[j].iter().sum::<f64>())
    }

    pub fn gdp(&self) -> f64 {
        self.capital_income.iter().sum::<f64>() + self.labor_income.iter().sum::<f64>()
    }

    /// Growth of each commodity's quantity, from the production functions:
    /// `g_i = A_i + Σ_j c_ji g_j + a_i hK_i + b_i hL_i`.
    pub fn quantity_growth(&self, year: Year) -> [f64; 3] {
        let x = self.gross_output();
        let a: Vec<Vec<f64>> = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| f64::from(u8::from(i == j)) - self.deliveries[j][i] / x[i])
                    .collect()
            })
            .collect();
        let b: Vec<f64> = (0..3)
            .map(|i| {
                self.tfp[&year][i]
                    + self.capital_income[i] / x[i] * self.capital_growth[&year][i]
                    + self.labor_income[i] / x[i] * self.labor_growth[&year][i]
            })
            .collect();
        let g = solve(a, b);
        [g[0], g[1], g[2]]
    }

    /// Aggregate value-added TFP: Törnqvist real GDP growth (final demand
    /// quantities) less share-weighted growth of every primary input.
    pub fn aggregate_residual(&self, year: Year) -> f64 {
        let gdp = self.gdp();
        let g = self.quantity_growth(year);
        let f = self.final_demand();
        let real_gdp_growth: f64 = (0..3).map(|j| f[j] / gdp * g[j]).sum();
        let primary: f64 = (0..3)
            .map(|i| {
                self.capital_income[i] / gdp * self.capital_growth[&year][i]
                    + self.labor_income[i] / gdp * self.labor_growth[&year][i]
            })
            .sum();
        real_gdp_growth - primary
    }

    pub fn industry_ids() -> [&'static str; 3] {
        ["MFG", "SRV", "ICT"]
    }

    /// Nominal gross output and GDP series plus industry TFP, ready for Domar aggregation.
    pub fn accounts(&self) -> (BTreeMap<String, IndustryAccount>, AnnualSeries) {
        let x = self.gross_output();
        let gdp: AnnualSeries = self
            .inflation
            .iter()
            .map(|(&y, &p)| (y, self.gdp() * p))
            .collect();
        let industries = Self::industry_ids()
            .into_iter()
            .enumerate()
            .map(|(i, id)| {
                let account = IndustryAccount {
                    id: id.to_string(),
                    gross_output: self
                        .inflation
                        .iter()
                        .map(|(&y, &p)| (y, x[i] * p))
                        .collect(),
                    tfp_growth: self.tfp.iter().map(|(&y, a)| (y, a[i])).collect(),
                };
                (id.to_string(), account)
            })
            .collect();
        (industries, gdp)
    }

    pub fn years(&self) -> Vec<Year> {
        self.tfp.keys().copied().collect()
    }
}

/// Copies a bundle directory, shuffling the data rows of every CSV file.
pub fn copy_shuffled<R: Rng>(from: &Path, to: &Path, rng: &mut R) {
    for entry in std::fs::read_dir(from).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let out = if path.extension().is_some_and(|e| e == "csv") {
            let mut lines: Vec<&str> = text.lines().collect();
            let header = lines.remove(0);
            lines.shuffle(rng);
            let mut s = String::from(header);
            for l in lines {
                s.push('\n');
                s.push_str(l);
            }
            s.push('\n');
            s
        } else {
            text
        };
        std::fs::write(to.join(name), out).unwrap();
    }
}

pub fn copy_dir(from: &Path, to: &Path) {
    for entry in std::fs::read_dir(from).unwrap() {
        let path = entry.unwrap().path();
        std::fs::copy(&path, to.join(path.file_name().unwrap())).unwrap();
    }
}
