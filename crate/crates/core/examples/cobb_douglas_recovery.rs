//! Generates output from a Cobb-Douglas technology with a known TFP path and
//! shows the residual recovering it.

use tfp_accounts::{decompose_basic, EconomyDataset, Mode, YearShares};

fn main() -> tfp_accounts::Result<()> {
    let alpha = 0.3;
    let tfp = |i: f64| (0.015 * i - 0.01 * (0.9 * i).sin()).exp();
    let mut ds = EconomyDataset::default();
    for i in 0..20 {
        let year = 1990 + i;
        let x = f64::from(i);
        let k = 250.0 * (0.04 * x).exp();
        let l = 90.0 * (0.01 * x).exp();
        ds.output
            .insert(year, tfp(x) * k.powf(alpha) * l.powf(1.0 - alpha));
        ds.capital_total.insert(year, k);
        ds.labor.insert(year, l);
        ds.shares.by_year.insert(
            year,
            YearShares {
                v_k: alpha,
                v_l: 1.0 - alpha,
                ..Default::default()
            },
        );
    }

    let mut worst: f64 = 0.0;
    for t in ds.growth_years() {
        let x = f64::from(t - 1990);
        let truth = (tfp(x) / tfp(x - 1.0)).ln();
        let d = decompose_basic(&ds, t, Mode::Levels)?;
        worst = worst.max((d.tfp_residual - truth).abs());
        println!("{t}: true {truth:+.6}  residual {:+.6}", d.tfp_residual);
    }
    println!("largest error: {worst:e}");
    Ok(())
}
