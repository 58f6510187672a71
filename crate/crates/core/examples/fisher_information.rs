//! Exact Fisher information against its large-N equivalent N^3 T^2 / (12 lambda).

use stochwave::moments::{fisher_asymptotic, fisher_exact};

fn main() -> stochwave::Result<()> {
    println!(
        "{:>6} {:>16} {:>16} {:>9}",
        "N", "exact", "asymptotic", "ratio"
    );
    for n in [1, 10, 100, 500, 1000, 5000] {
        let exact = fisher_exact(n, 1.0, 1.0, 1.0)?;
        let asym = fisher_asymptotic(n, 1.0, 1.0)?;
        println!("{n:>6} {exact:>16.4} {asym:>16.4} {:>9.6}", exact / asym);
    }
    Ok(())
}
