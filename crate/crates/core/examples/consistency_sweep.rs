//! Estimates from the first n modes of each replication, n = 5, 10, ..., 100.

use stochwave::experiments::run_consistency_sweep;
use stochwave::{CampaignSpec, ExperimentKind, SimConfig};

fn main() -> stochwave::Result<()> {
    let sim = SimConfig::new(10.0, 5.0, 100, 10_000, 1.0).with_seed(42);
    let sweep = (1..=20).map(|j| 5 * j).collect();
    let spec = CampaignSpec::new(sim, ExperimentKind::ConsistencySweep, 10).with_sweep(sweep);
    let report = run_consistency_sweep(&spec)?;

    println!("{:>4} {:>12} {:>12}", "n", "mean est.", "mean |err|");
    for p in &report.sweep_path {
        println!(
            "{:>4} {:>12.5} {:>12.5}",
            p.n,
            p.mean_lambda_hat.unwrap_or(f64::NAN),
            p.mean_abs_error.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
