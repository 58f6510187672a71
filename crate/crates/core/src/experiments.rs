//! Seeded Monte-Carlo campaigns: consistency in N, asymptotic normality of the
//! scaled error, and discretization rates in M.
//!
//! Replication `r` draws all of its randomness from streams keyed by
//! `(base_seed, r, k)`, and results are collected in replication order, so a
//! report does not depend on the worker count.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::SimConfig;
use crate::error::{Error, Result};
use crate::estimator::{
    aggregate, mode_sums, subsampled_statistics, sufficient_statistics, Estimate,
};
use crate::rng::{replication_seed, GaussianStream};
use crate::sim::{simulate, TrajectorySet};
use crate::stats::{histogram, ks_test, summarize, Histogram, KsResult, Summary};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    ConsistencySweep,
    Normality,
    RateCheck,
}

/// Where replication data comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum DataSource {
    /// Trajectories from the configured scheme.
    #[default]
    Simulated,
    /// Random nonzero displacements with noise-free velocity increments
    /// `-lambda k^2 u dt`; the estimator must return lambda exactly.
    Noiseless,
    /// Normality only: standard normal draws injected as z_canonical, to
    /// check the KS machinery against its null distribution.
    GaussianNull,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignSpec {
    pub sim: SimConfig,
    pub replications: usize,
    pub experiment: ExperimentKind,
    /// Mode counts (consistency) or coarse step counts (rate check).
    #[serde(default)]
    pub sweep: Vec<usize>,
    /// Worker threads; `None` uses rayon's default.
    #[serde(default)]
    pub threads: Option<usize>,
    #[serde(default)]
    pub source: DataSource,
    #[serde(default = "default_bins")]
    pub histogram_bins: usize,
    #[serde(default = "default_range")]
    pub histogram_range: (f64, f64),
}

fn default_bins() -> usize {
    16
}

fn default_range() -> (f64, f64) {
    (-4.0, 4.0)
}

impl CampaignSpec {
    pub fn new(sim: SimConfig, experiment: ExperimentKind, replications: usize) -> Self {
        Self {
            sim,
            replications,
            experiment,
            sweep: Vec::new(),
            threads: None,
            source: DataSource::Simulated,
            histogram_bins: default_bins(),
            histogram_range: default_range(),
        }
    }

    pub fn with_sweep(mut self, sweep: Vec<usize>) -> Self {
        self.sweep = sweep;
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = Some(threads);
        self
    }

    pub fn with_source(mut self, source: DataSource) -> Self {
        self.source = source;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.sim.validate()?;
        if self.replications == 0 {
            return Err(Error::config("replications", "must be at least 1"));
        }
        if self.threads == Some(0) {
            return Err(Error::config("threads", "must be at least 1"));
        }
        let needs_sweep = matches!(
            self.experiment,
            ExperimentKind::ConsistencySweep | ExperimentKind::RateCheck
        );
        if needs_sweep && self.sweep.is_empty() {
            return Err(Error::config("sweep", "must not be empty"));
        }
        if self.sweep.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config("sweep", "must be strictly increasing"));
        }
        match self.experiment {
            ExperimentKind::ConsistencySweep => {
                if let Some(&n) = self.sweep.iter().find(|&&n| n == 0 || n > self.sim.n_modes) {
                    return Err(Error::config(
                        "sweep",
                        format!("mode count {n} outside 1..={}", self.sim.n_modes),
                    ));
                }
            }
            ExperimentKind::RateCheck => {
                let m_ref = self.sim.m_steps;
                if let Some(&m) = self
                    .sweep
                    .iter()
                    .find(|&&m| m == 0 || m > m_ref || m_ref % m != 0)
                {
                    return Err(Error::config(
                        "sweep",
                        format!("step count {m} does not divide the reference M = {m_ref}"),
                    ));
                }
                if self.source == DataSource::GaussianNull {
                    return Err(Error::config(
                        "source",
                        "gaussian_null applies to normality only",
                    ));
                }
            }
            ExperimentKind::Normality => {
                if self.replications < 100 {
                    return Err(Error::config(
                        "replications",
                        format!(
                            "normality needs at least 100 for the KS test, got {}",
                            self.replications
                        ),
                    ));
                }
            }
        }
        if self.source == DataSource::GaussianNull && self.experiment != ExperimentKind::Normality {
            return Err(Error::config(
                "source",
                "gaussian_null applies to normality only",
            ));
        }
        if self.histogram_bins == 0 {
            return Err(Error::config("histogram_bins", "must be at least 1"));
        }
        let (lo, hi) = self.histogram_range;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::config("histogram_range", "needs finite lo < hi"));
        }
        Ok(())
    }
}

/// One estimate: replication `replication` truncated to `n` modes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicationRecord {
    pub replication: u64,
    pub seed: u64,
    pub n: usize,
    pub lambda_hat: Option<f64>,
    pub z_canonical: Option<f64>,
    pub z_paper: Option<f64>,
    /// Set when the estimate could not be formed (degenerate J).
    pub error: Option<String>,
}

/// Squared discrepancies of one replication at one coarse step count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateSample {
    pub replication: u64,
    pub m: usize,
    pub sq_j: f64,
    pub sq_xi: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateRow {
    pub m: usize,
    pub mse_xi: Option<f64>,
    pub mse_j: f64,
}

/// Per-n aggregate of a consistency sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub n: usize,
    pub mean_lambda_hat: Option<f64>,
    pub mean_abs_error: Option<f64>,
    pub degenerate: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub crate_version: String,
    pub generator_version: u32,
    pub spec: CampaignSpec,
    pub records: Vec<ReplicationRecord>,
    /// Summary of lambda_hat at the largest mode count.
    pub lambda_summary: Option<Summary>,
    pub z_summary: Option<Summary>,
    pub ks: Option<KsResult>,
    pub histogram: Option<Histogram>,
    pub sweep_path: Vec<SweepPoint>,
    pub rate_samples: Vec<RateSample>,
    pub rates: Vec<RateRow>,
    /// Least-squares slope of ln(mse_j) against ln(M).
    pub rate_slope_j: Option<f64>,
    pub rate_slope_xi: Option<f64>,
    pub wall_clock_seconds: f64,
}

impl ExperimentReport {
    fn empty(spec: &CampaignSpec) -> Self {
        Self {
            schema_version: REPORT_SCHEMA_VERSION,
            crate_version: env!("CARGO_PKG_VERSION").to_string(),
            generator_version: crate::rng::GENERATOR_VERSION,
            spec: spec.clone(),
            records: Vec::new(),
            lambda_summary: None,
            z_summary: None,
            ks: None,
            histogram: None,
            sweep_path: Vec::new(),
            rate_samples: Vec::new(),
            rates: Vec::new(),
            rate_slope_j: None,
            rate_slope_xi: None,
            wall_clock_seconds: 0.0,
        }
    }

    /// Copy with timing metadata cleared, for reproducibility comparisons.
    pub fn without_timing(&self) -> Self {
        Self {
            wall_clock_seconds: 0.0,
            ..self.clone()
        }
    }
}

pub fn run_campaign(spec: &CampaignSpec) -> Result<ExperimentReport> {
    match spec.experiment {
        ExperimentKind::ConsistencySweep => run_consistency_sweep(spec),
        ExperimentKind::Normality => run_normality(spec),
        ExperimentKind::RateCheck => run_rate_check(spec),
    }
}

/// Maps `f` over replication indices on a pool of `spec.threads` workers,
/// returning results in index order.
fn par_replications<T, F>(spec: &CampaignSpec, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    let run = || {
        (0..spec.replications as u64)
            .into_par_iter()
            .map(&f)
            .collect::<Vec<T>>()
    };
    match spec.threads {
        Some(threads) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Error::config("threads", e.to_string()))?;
            Ok(pool.install(run))
        }
        None => Ok(run()),
    }
}

fn replication_data(spec: &CampaignSpec, replication: u64) -> Result<TrajectorySet> {
    match spec.source {
        DataSource::Simulated => simulate(&spec.sim, replication),
        DataSource::Noiseless => noiseless_trajectory(&spec.sim, replication),
        DataSource::GaussianNull => Err(Error::config(
            "source",
            "gaussian_null does not produce trajectories",
        )),
    }
}

/// Synthetic trajectory with random displacements and velocity increments
/// exactly `-lambda k^2 u(t_{i-1}) dt`.
pub fn noiseless_trajectory(config: &SimConfig, replication: u64) -> Result<TrajectorySet> {
    config.validate()?;
    let m = config.m_steps;
    let dt = config.dt();
    let (u, v): (Vec<_>, Vec<_>) = (1..=config.n_modes)
        .map(|k| {
            let mut g = GaussianStream::for_mode(config.base_seed, replication, k);
            let kf = k as f64;
            let stiffness = config.lambda * kf * kf;
            let mut u = vec![0.0; m + 1];
            let mut v = vec![0.0; m + 1];
            for i in 1..=m {
                u[i] = g.next_normal() / kf;
                v[i] = v[i - 1] - stiffness * u[i - 1] * dt;
            }
            (u, v)
        })
        .unzip();
    let mut traj = TrajectorySet::from_parts(config.clone(), u, v, None)?;
    traj.replication = replication;
    Ok(traj)
}

fn record_from(
    replication: u64,
    seed: u64,
    n: usize,
    estimate: Result<Estimate>,
) -> Result<ReplicationRecord> {
    match estimate {
        Ok(est) => Ok(ReplicationRecord {
            replication,
            seed,
            n,
            lambda_hat: Some(est.lambda_hat),
            z_canonical: est.z_canonical,
            z_paper: est.z_paper,
            error: None,
        }),
        Err(Error::Degenerate) => Ok(ReplicationRecord {
            replication,
            seed,
            n,
            lambda_hat: None,
            z_canonical: None,
            z_paper: None,
            error: Some(Error::Degenerate.to_string()),
        }),
        Err(e) => Err(e),
    }
}

fn wrap_failure(seed: u64) -> impl FnOnce(Error) -> Error {
    move |e| Error::Replication {
        seed,
        source: Box::new(e),
    }
}

/// Estimates from the first n modes of each replication, for each n in the
/// sweep. One N-mode trajectory per replication is shared by all n.
pub fn run_consistency_sweep(spec: &CampaignSpec) -> Result<ExperimentReport> {
    spec.validate()?;
    if spec.experiment != ExperimentKind::ConsistencySweep {
        return Err(Error::config("experiment", "expected consistency_sweep"));
    }
    let start = Instant::now();
    let lambda = spec.sim.lambda;
    let per_rep = par_replications(spec, |r| -> Result<Vec<ReplicationRecord>> {
        let seed = replication_seed(spec.sim.base_seed, r);
        let traj = replication_data(spec, r).map_err(wrap_failure(seed))?;
        let sums = mode_sums(&traj, 1).map_err(wrap_failure(seed))?;
        spec.sweep
            .iter()
            .map(|&n| {
                let stats = aggregate(&sums[..n], traj.m_steps(), spec.sim.t_final);
                record_from(
                    r,
                    seed,
                    n,
                    Estimate::from_stats(stats, &spec.sim, Some(lambda)),
                )
                .map_err(wrap_failure(seed))
            })
            .collect()
    })?;
    let mut report = ExperimentReport::empty(spec);
    for records in per_rep {
        report.records.extend(records?);
    }
    report.sweep_path = sweep_path(&report.records, &spec.sweep, lambda);
    let n_max = *spec.sweep.last().expect("validated nonempty");
    report.lambda_summary = summarize(&field_at(&report.records, n_max, |r| r.lambda_hat)).ok();
    report.z_summary = summarize(&field_at(&report.records, n_max, |r| r.z_canonical)).ok();
    report.wall_clock_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

fn field_at(
    records: &[ReplicationRecord],
    n: usize,
    field: impl Fn(&ReplicationRecord) -> Option<f64>,
) -> Vec<f64> {
    records
        .iter()
        .filter(|r| r.n == n)
        .filter_map(field)
        .collect()
}

/// Per-n means over replications, in sweep order.
pub fn sweep_path(records: &[ReplicationRecord], sweep: &[usize], lambda: f64) -> Vec<SweepPoint> {
    sweep
        .iter()
        .map(|&n| {
            let at_n: Vec<&ReplicationRecord> = records.iter().filter(|r| r.n == n).collect();
            let values: Vec<f64> = at_n.iter().filter_map(|r| r.lambda_hat).collect();
            let mean =
                |xs: &[f64]| (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64);
            let errors: Vec<f64> = values.iter().map(|x| (x - lambda).abs()).collect();
            SweepPoint {
                n,
                mean_lambda_hat: mean(&values),
                mean_abs_error: mean(&errors),
                degenerate: at_n.len() - values.len(),
            }
        })
        .collect()
}

/// R independent estimates at the full mode count, their normalized errors,
/// a KS test of z_canonical against the standard normal, and a histogram.
pub fn run_normality(spec: &CampaignSpec) -> Result<ExperimentReport> {
    spec.validate()?;
    if spec.experiment != ExperimentKind::Normality {
        return Err(Error::config("experiment", "expected normality"));
    }
    let start = Instant::now();
    let cfg = &spec.sim;
    let n = cfg.n_modes;
    let per_rep = par_replications(spec, |r| -> Result<ReplicationRecord> {
        let seed = replication_seed(cfg.base_seed, r);
        let estimate = if spec.source == DataSource::GaussianNull {
            // lambda_hat placed so that z_canonical is the drawn normal
            let z = GaussianStream::for_mode(cfg.base_seed, r, 1).next_normal();
            let nf = n as f64;
            let lambda_hat =
                cfg.lambda + z * (12.0 * cfg.lambda).sqrt() / (cfg.t_final * nf * nf.sqrt());
            let stats = crate::estimator::SufficientStats {
                xi: None,
                j_stat: 1.0,
                b_stat: lambda_hat,
                n_modes: n,
                m_steps: cfg.m_steps,
                t_final: cfg.t_final,
            };
            Estimate::from_stats(stats, cfg, Some(cfg.lambda))
        } else {
            replication_data(spec, r)
                .and_then(|traj| sufficient_statistics(&traj))
                .and_then(|stats| Estimate::from_stats(stats, cfg, Some(cfg.lambda)))
        };
        let est = estimate.map_err(wrap_failure(seed))?;
        Ok(ReplicationRecord {
            replication: r,
            seed,
            n,
            lambda_hat: Some(est.lambda_hat),
            z_canonical: est.z_canonical,
            z_paper: est.z_paper,
            error: None,
        })
    })?;
    let mut report = ExperimentReport::empty(spec);
    report.records = per_rep.into_iter().collect::<Result<_>>()?;
    fill_normality_aggregates(&mut report)?;
    report.wall_clock_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Recomputes the normality aggregates from the stored records.
pub fn fill_normality_aggregates(report: &mut ExperimentReport) -> Result<()> {
    let z: Vec<f64> = report
        .records
        .iter()
        .filter_map(|r| r.z_canonical)
        .collect();
    let lambdas: Vec<f64> = report.records.iter().filter_map(|r| r.lambda_hat).collect();
    let (lo, hi) = report.spec.histogram_range;
    report.ks = Some(ks_test(&z)?);
    report.z_summary = summarize(&z).ok();
    report.lambda_summary = summarize(&lambdas).ok();
    report.histogram = Some(histogram(&z, report.spec.histogram_bins, lo, hi)?);
    Ok(())
}

/// Squared discrepancy between statistics on coarse grids and on the
/// trajectory's own fine grid (M_ref = `sim.m_steps`), averaged over
/// replications.
pub fn run_rate_check(spec: &CampaignSpec) -> Result<ExperimentReport> {
    spec.validate()?;
    if spec.experiment != ExperimentKind::RateCheck {
        return Err(Error::config("experiment", "expected rate_check"));
    }
    let start = Instant::now();
    let cfg = &spec.sim;
    let per_rep = par_replications(spec, |r| -> Result<(ReplicationRecord, Vec<RateSample>)> {
        let seed = replication_seed(cfg.base_seed, r);
        let traj = replication_data(spec, r).map_err(wrap_failure(seed))?;
        let fine = sufficient_statistics(&traj).map_err(wrap_failure(seed))?;
        let record = record_from(
            r,
            seed,
            cfg.n_modes,
            Estimate::from_stats(fine.clone(), cfg, Some(cfg.lambda)),
        )
        .map_err(wrap_failure(seed))?;
        let samples = spec
            .sweep
            .iter()
            .map(|&m| {
                let coarse = subsampled_statistics(&traj, m)?;
                let dj = coarse.j_stat - fine.j_stat;
                let sq_xi = coarse.xi.zip(fine.xi).map(|(c, f)| (c - f) * (c - f));
                Ok(RateSample {
                    replication: r,
                    m,
                    sq_j: dj * dj,
                    sq_xi,
                })
            })
            .collect::<Result<Vec<_>>>()
            .map_err(wrap_failure(seed))?;
        Ok((record, samples))
    })?;
    let mut report = ExperimentReport::empty(spec);
    for rep in per_rep {
        let (record, samples) = rep?;
        report.records.push(record);
        report.rate_samples.extend(samples);
    }
    fill_rate_aggregates(&mut report);
    report.wall_clock_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Recomputes the rate table and slopes from the stored samples.
pub fn fill_rate_aggregates(report: &mut ExperimentReport) {
    let rows: Vec<RateRow> = report
        .spec
        .sweep
        .iter()
        .map(|&m| {
            let at_m: Vec<&RateSample> = report.rate_samples.iter().filter(|s| s.m == m).collect();
            let count = at_m.len() as f64;
            let mse_j = at_m.iter().map(|s| s.sq_j).sum::<f64>() / count;
            let mse_xi = at_m
                .iter()
                .map(|s| s.sq_xi)
                .collect::<Option<Vec<f64>>>()
                .map(|xs| xs.iter().sum::<f64>() / count);
            RateRow { m, mse_xi, mse_j }
        })
        .collect();
    let xs: Vec<f64> = rows.iter().map(|r| (r.m as f64).ln()).collect();
    let ys_j: Vec<f64> = rows.iter().map(|r| r.mse_j.ln()).collect();
    report.rate_slope_j = loglog_slope(&xs, &ys_j);
    report.rate_slope_xi = rows
        .iter()
        .map(|r| r.mse_xi.map(f64::ln))
        .collect::<Option<Vec<f64>>>()
        .and_then(|ys| loglog_slope(&xs, &ys));
    report.lambda_summary = summarize(
        &report
            .records
            .iter()
            .filter_map(|r| r.lambda_hat)
            .collect::<Vec<_>>(),
    )
    .ok();
    report.rates = rows;
}

/// Ordinary least-squares slope; `None` with fewer than two points or
/// non-finite inputs.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() < 2 || xs.len() != ys.len() || xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return None;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Scheme;

    fn small(kind: ExperimentKind, reps: usize) -> CampaignSpec {
        CampaignSpec::new(
            SimConfig::new(2.0, 1.0, 12, 400, 1.0).with_seed(11),
            kind,
            reps,
        )
    }

    #[test]
    fn validation() {
        let ok = small(ExperimentKind::ConsistencySweep, 2).with_sweep(vec![2, 4, 12]);
        ok.validate().unwrap();
        let bad = [
            small(ExperimentKind::ConsistencySweep, 2).with_sweep(vec![]),
            small(ExperimentKind::ConsistencySweep, 2).with_sweep(vec![4, 4]),
            small(ExperimentKind::ConsistencySweep, 2).with_sweep(vec![4, 13]),
            small(ExperimentKind::RateCheck, 2).with_sweep(vec![3]),
            small(ExperimentKind::RateCheck, 2).with_sweep(vec![800]),
            small(ExperimentKind::Normality, 50),
            small(ExperimentKind::ConsistencySweep, 0).with_sweep(vec![1]),
            small(ExperimentKind::ConsistencySweep, 2)
                .with_sweep(vec![1])
                .with_source(DataSource::GaussianNull),
        ];
        for spec in bad {
            assert!(
                matches!(spec.validate(), Err(Error::Config { .. })),
                "{spec:?}"
            );
        }
    }

    #[test]
    fn noiseless_sweep_recovers_lambda() {
        let spec = small(ExperimentKind::ConsistencySweep, 3)
            .with_sweep(vec![1, 5, 12])
            .with_source(DataSource::Noiseless);
        let report = run_consistency_sweep(&spec).unwrap();
        assert_eq!(report.records.len(), 9);
        for r in &report.records {
            let l = r.lambda_hat.unwrap();
            assert!((l - 2.0).abs() <= 1e-12 * 2.0, "{l}");
        }
    }

    #[test]
    fn degenerate_records_are_flagged() {
        let spec = CampaignSpec::new(
            SimConfig::new(1.0, 1.0, 1, 1, 1.0),
            ExperimentKind::ConsistencySweep,
            1,
        )
        .with_sweep(vec![1]);
        let report = run_consistency_sweep(&spec).unwrap();
        assert_eq!(report.records.len(), 1);
        assert!(report.records[0].lambda_hat.is_none());
        assert!(report.records[0].error.is_some());
        assert_eq!(report.sweep_path[0].degenerate, 1);
    }

    #[test]
    fn thread_count_does_not_change_records() {
        let base = small(ExperimentKind::ConsistencySweep, 6).with_sweep(vec![3, 12]);
        let one = run_consistency_sweep(&base.clone().with_threads(1)).unwrap();
        let four = run_consistency_sweep(&base.with_threads(4)).unwrap();
        assert_eq!(one.records, four.records);
    }

    #[test]
    fn rate_check_reference_is_exact() {
        let spec = small(ExperimentKind::RateCheck, 3).with_sweep(vec![100, 200, 400]);
        let report = run_rate_check(&spec).unwrap();
        let last = report.rates.last().unwrap();
        assert_eq!(last.m, 400);
        assert_eq!(last.mse_j, 0.0);
        assert_eq!(last.mse_xi, Some(0.0));
        assert!(report.rates[0].mse_j > report.rates[1].mse_j);
        assert_eq!(report.rate_samples.len(), 9);
    }

    #[test]
    fn rate_check_without_noise_record() {
        let mut spec = small(ExperimentKind::RateCheck, 2).with_sweep(vec![100, 200]);
        spec.sim.scheme = Scheme::Exact;
        let report = run_rate_check(&spec).unwrap();
        assert!(report.rates.iter().all(|r| r.mse_xi.is_none()));
        assert!(report.rate_slope_xi.is_none());
        assert!(report.rate_slope_j.is_some());
    }

    #[test]
    fn slope_of_power_law() {
        let xs: Vec<f64> = [1.0f64, 2.0, 4.0, 8.0].iter().map(|x| x.ln()).collect();
        let ys: Vec<f64> = [1.0f64, 2.0, 4.0, 8.0]
            .iter()
            .map(|x| (3.0 / x).ln())
            .collect();
        assert!((loglog_slope(&xs, &ys).unwrap() + 1.0).abs() < 1e-12);
        assert!(loglog_slope(&xs[..1], &ys[..1]).is_none());
    }

    #[test]
    fn aggregates_recompute_from_records() {
        let spec = small(ExperimentKind::Normality, 100).with_source(DataSource::GaussianNull);
        let report = run_normality(&spec).unwrap();
        let mut again = report.clone();
        again.ks = None;
        again.histogram = None;
        again.z_summary = None;
        fill_normality_aggregates(&mut again).unwrap();
        assert_eq!(again, report);
        let h = report.histogram.unwrap();
        assert_eq!(h.counts.iter().sum::<u64>() + h.below + h.above, 100);
    }
}
