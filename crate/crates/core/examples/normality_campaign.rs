//! Normalized estimation errors over many replications, tested against N(0, 1).
//!
//! cargo run --release --example normality_campaign -- [out_dir]

use stochwave::experiments::run_normality;
use stochwave::io::write_report;
use stochwave::{CampaignSpec, ExperimentKind, SimConfig};

fn main() -> stochwave::Result<()> {
    let out = std::env::args().nth(1);
    let sim = SimConfig::new(0.8, 5.0, 100, 10_000, 1.0).with_seed(42);
    let report = run_normality(&CampaignSpec::new(sim, ExperimentKind::Normality, 200))?;

    let z = report.z_summary.as_ref().unwrap();
    let ks = report.ks.as_ref().unwrap();
    println!(
        "z_canonical: mean {:+.4}, variance {:.4}",
        z.mean, z.variance
    );
    println!("KS: D = {:.4}, p = {:.4}", ks.d_stat, ks.p_value);

    let hist = report.histogram.as_ref().unwrap();
    for (j, &count) in hist.counts.iter().enumerate() {
        println!(
            "[{:+.1}, {:+.1}) {}",
            hist.edges[j],
            hist.edges[j + 1],
            "#".repeat(count as usize)
        );
    }
    if let Some(dir) = out {
        write_report(dir.as_ref(), &report)?;
        println!("report written to {dir}");
    }
    Ok(())
}
