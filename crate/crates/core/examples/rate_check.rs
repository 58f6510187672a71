//! Mean-square gap between coarse-grid and fine-grid statistics as M grows.

use stochwave::experiments::run_rate_check;
use stochwave::{CampaignSpec, ExperimentKind, SimConfig};

fn main() -> stochwave::Result<()> {
    let sim = SimConfig::new(1.0, 1.0, 20, 64_000, 1.0).with_seed(7);
    let spec = CampaignSpec::new(sim, ExperimentKind::RateCheck, 50)
        .with_sweep(vec![500, 1000, 2000, 4000]);
    let report = run_rate_check(&spec)?;

    println!("{:>6} {:>14} {:>14}", "M", "mse_xi", "mse_j");
    for row in &report.rates {
        println!(
            "{:>6} {:>14.4e} {:>14.4e}",
            row.m,
            row.mse_xi.unwrap_or(f64::NAN),
            row.mse_j
        );
    }
    println!(
        "log-log slope: J {:.3}, xi {:.3}",
        report.rate_slope_j.unwrap(),
        report.rate_slope_xi.unwrap()
    );
    Ok(())
}
