//! Simulate a few Fourier modes with the Euler scheme and write them to CSV.
//!
//! cargo run --example simulate_modes -- [out.csv]

use stochwave::io::{sidecar_path, write_trajectory};
use stochwave::sim::simulate;
use stochwave::SimConfig;

fn main() -> stochwave::Result<()> {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "modes.csv".into());
    let cfg = SimConfig::new(10.0, 5.0, 8, 2000, 1.0).with_seed(42);
    let traj = simulate(&cfg, 0)?;

    for k in 1..=traj.n_modes() {
        let u = &traj.u[k - 1];
        let rms = (u.iter().map(|x| x * x).sum::<f64>() / u.len() as f64).sqrt();
        println!(
            "mode {k:>2}: u(T) = {:+.5}, rms u = {rms:.5}",
            u[cfg.m_steps]
        );
    }

    let path = std::path::Path::new(&out);
    write_trajectory(path, &traj)?;
    println!(
        "wrote {} and {}",
        path.display(),
        sidecar_path(path).display()
    );
    Ok(())
}
