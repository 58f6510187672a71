//! Discretized maximum-likelihood estimation of lambda from grid observations.
//!
//! With left-endpoint sums on the grid `t_i = i T / M`
//!
//! ```text
//! J  = sum_k k^4 sum_i u_k(t_{i-1})^2 dt
//! B  = -sum_k k^2 sum_i u_k(t_{i-1}) (v_k(t_i) - v_k(t_{i-1}))
//! xi = sum_k k^2 sum_i u_k(t_{i-1}) (w_k(t_i) - w_k(t_{i-1}))
//! ```
//!
//! the estimator is `lambda_hat = B / J`. `xi` needs the driving noise and is
//! only available for synthetic data; it is used to check `B = lambda J - sigma xi`.

use serde::{Deserialize, Serialize};

use crate::config::SimConfig;
use crate::error::{Error, Result};
use crate::moments::upsilon;
use crate::sim::TrajectorySet;

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = KahanSum::default();
        iter.into_iter().for_each(|x| s.add(x));
        s
    }
}

/// Per-mode contributions to the sufficient statistics, already weighted by
/// `k^2` (B, xi) and `k^4` (J).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSums {
    pub j: f64,
    pub b: f64,
    pub xi: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SufficientStats {
    pub xi: Option<f64>,
    pub j_stat: f64,
    pub b_stat: f64,
    pub n_modes: usize,
    pub m_steps: usize,
    pub t_final: f64,
}

/// Per-mode sums on the grid obtained by keeping every `stride`-th point of
/// the trajectory grid. Noise increments over a coarse step are the sums of
/// the fine increments it covers.
pub fn mode_sums(traj: &TrajectorySet, stride: usize) -> Result<Vec<ModeSums>> {
    let m = traj.m_steps();
    if stride == 0 || m % stride != 0 {
        return Err(Error::Domain(format!(
            "stride {stride} does not divide M = {m}"
        )));
    }
    let dt = traj.dt() * stride as f64;
    let coarse = m / stride;
    traj.u
        .iter()
        .zip(&traj.v)
        .enumerate()
        .map(|(idx, (u, v))| {
            let k2 = ((idx + 1) * (idx + 1)) as f64;
            let mut j = KahanSum::default();
            let mut b = KahanSum::default();
            for i in 1..=coarse {
                let prev = (i - 1) * stride;
                let left = u[prev];
                if left.is_nan() || v[prev].is_nan() || v[i * stride].is_nan() {
                    return Err(Error::Data(format!(
                        "NaN in mode {} at step {prev}",
                        idx + 1
                    )));
                }
                j.add(left * left * dt);
                b.add(left * (v[i * stride] - v[prev]));
            }
            let xi = traj.dw.as_ref().map(|dw| {
                let dw = &dw[idx];
                let mut xi = KahanSum::default();
                for i in 1..=coarse {
                    let prev = (i - 1) * stride;
                    let incr: f64 = dw[prev..i * stride].iter().sum();
                    xi.add(u[prev] * incr);
                }
                k2 * xi.total()
            });
            if xi.is_some_and(f64::is_nan) {
                return Err(Error::Data(format!(
                    "NaN noise increment in mode {}",
                    idx + 1
                )));
            }
            Ok(ModeSums {
                j: k2 * k2 * j.total(),
                b: -k2 * b.total(),
                xi,
            })
        })
        .collect()
}

/// Reduces per-mode sums in mode order.
pub fn aggregate(sums: &[ModeSums], m_steps: usize, t_final: f64) -> SufficientStats {
    let j: KahanSum = sums.iter().map(|s| s.j).collect();
    let b: KahanSum = sums.iter().map(|s| s.b).collect();
    let xi = sums
        .iter()
        .map(|s| s.xi)
        .collect::<Option<Vec<f64>>>()
        .map(|xs| xs.into_iter().collect::<KahanSum>().total());
    SufficientStats {
        xi,
        j_stat: j.total(),
        b_stat: b.total(),
        n_modes: sums.len(),
        m_steps,
        t_final,
    }
}

pub fn sufficient_statistics(traj: &TrajectorySet) -> Result<SufficientStats> {
    let sums = mode_sums(traj, 1)?;
    Ok(aggregate(&sums, traj.m_steps(), traj.config.t_final))
}

/// Statistics as they would be computed from observations on the coarser
/// grid of `coarse_m` steps (which must divide the trajectory's M).
pub fn subsampled_statistics(traj: &TrajectorySet, coarse_m: usize) -> Result<SufficientStats> {
    let m = traj.m_steps();
    if coarse_m == 0 || m % coarse_m != 0 {
        return Err(Error::Domain(format!(
            "coarse grid of {coarse_m} steps does not divide M = {m}"
        )));
    }
    let sums = mode_sums(traj, m / coarse_m)?;
    Ok(aggregate(&sums, coarse_m, traj.config.t_final))
}

/// `T N^{3/2} (lambda_hat - lambda) / sqrt(12 lambda)`; asymptotically N(0, 1).
pub fn z_canonical(lambda_hat: f64, lambda: f64, n_modes: usize, t_final: f64) -> f64 {
    let n = n_modes as f64;
    t_final * n * n.sqrt() * (lambda_hat - lambda) / (12.0 * lambda).sqrt()
}

/// `N^{3/2} sigma Upsilon (lambda - lambda_hat)` with `Upsilon = T / sqrt(12 lambda)`.
pub fn z_paper(lambda_hat: f64, lambda: f64, sigma: f64, n_modes: usize, t_final: f64) -> f64 {
    let n = n_modes as f64;
    let ups = upsilon(t_final, lambda).unwrap_or(f64::NAN);
    n * n.sqrt() * sigma * ups * (lambda - lambda_hat)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub lambda_hat: f64,
    pub stats: SufficientStats,
    pub lambda_true: Option<f64>,
    pub z_canonical: Option<f64>,
    pub z_paper: Option<f64>,
    pub config: SimConfig,
}

impl Estimate {
    pub fn from_stats(
        stats: SufficientStats,
        config: &SimConfig,
        lambda_true: Option<f64>,
    ) -> Result<Self> {
        if stats.j_stat == 0.0 {
            return Err(Error::Degenerate);
        }
        let mut est = Estimate {
            lambda_hat: stats.b_stat / stats.j_stat,
            stats,
            lambda_true: None,
            z_canonical: None,
            z_paper: None,
            config: config.clone(),
        };
        if let Some(truth) = lambda_true {
            est = est.with_truth(truth)?;
        }
        Ok(est)
    }

    /// Attaches the true lambda and fills the normalized errors.
    pub fn with_truth(mut self, lambda_true: f64) -> Result<Self> {
        if !(lambda_true.is_finite() && lambda_true > 0.0) {
            return Err(Error::Domain(format!(
                "true lambda must be positive, got {lambda_true}"
            )));
        }
        self.lambda_true = Some(lambda_true);
        let (zc, zp) = normalized_errors(&self)?;
        self.z_canonical = Some(zc);
        self.z_paper = Some(zp);
        Ok(self)
    }
}

/// `lambda_hat = B / J` over all modes of `traj`.
pub fn mle(traj: &TrajectorySet, lambda_true: Option<f64>) -> Result<Estimate> {
    let stats = sufficient_statistics(traj)?;
    Estimate::from_stats(stats, &traj.config, lambda_true)
}

/// `B - (lambda J - sigma xi)` for the given parameters. Zero up to rounding
/// on Euler data generated with the same parameters.
pub fn identity_residual(traj: &TrajectorySet, lambda: f64, sigma: f64) -> Result<f64> {
    if traj.dw.is_none() {
        return Err(Error::MissingNoise);
    }
    let stats = sufficient_statistics(traj)?;
    let xi = stats.xi.ok_or(Error::MissingNoise)?;
    Ok(stats.b_stat - (lambda * stats.j_stat - sigma * xi))
}

/// `(z_canonical, z_paper)` for an estimate carrying its true lambda.
pub fn normalized_errors(estimate: &Estimate) -> Result<(f64, f64)> {
    let truth = estimate.lambda_true.ok_or(Error::MissingTruth)?;
    let n = estimate.stats.n_modes;
    let t = estimate.stats.t_final;
    Ok((
        z_canonical(estimate.lambda_hat, truth, n, t),
        z_paper(estimate.lambda_hat, truth, estimate.config.sigma, n, t),
    ))
}
