//! Rebuild the displacement field u(t, x) from its modes at a few times.

use std::f64::consts::PI;

use stochwave::sim::{reconstruct_field, simulate};
use stochwave::SimConfig;

fn main() -> stochwave::Result<()> {
    let cfg = SimConfig::new(1.0, 1.0, 50, 1000, 1.0).with_seed(7);
    let traj = simulate(&cfg, 0)?;
    let x_grid: Vec<f64> = (0..=10).map(|j| PI * j as f64 / 10.0).collect();

    for index in [250, 500, 1000] {
        let slice = reconstruct_field(&traj, index, &x_grid)?;
        let row: Vec<String> = slice.values_u.iter().map(|u| format!("{u:+.4}")).collect();
        println!("t = {:.2}: {}", slice.t, row.join(" "));
    }
    Ok(())
}
