//! Compare both samplers with the closed-form E u_k(T)^2.

use stochwave::moments::{mean_square_u, ModeContext};
use stochwave::sim::simulate;
use stochwave::{Scheme, SimConfig};

fn main() -> stochwave::Result<()> {
    let reps = 4000;
    let modes = [1usize, 2, 5];
    let base = SimConfig::new(1.0, 1.0, 5, 20, 1.0).with_seed(11);
    println!(
        "{:>3} {:>10} {:>10} {:>10}",
        "k", "closed", "exact", "euler"
    );
    let mut means = Vec::new();
    for scheme in [Scheme::Exact, Scheme::Euler] {
        let cfg = base.clone().with_scheme(scheme);
        let mut sums = [0.0; 3];
        for r in 0..reps {
            let traj = simulate(&cfg, r)?;
            for (slot, &k) in modes.iter().enumerate() {
                sums[slot] += traj.u[k - 1][cfg.m_steps].powi(2);
            }
        }
        means.push(sums.map(|s| s / reps as f64));
    }
    for (slot, &k) in modes.iter().enumerate() {
        let closed = mean_square_u(&ModeContext::new(k, 1.0, 1.0)?, 1.0)?;
        println!(
            "{k:>3} {closed:>10.5} {:>10.5} {:>10.5}",
            means[0][slot], means[1][slot]
        );
    }
    Ok(())
}
