//! Command-line front end: `simulate`, `estimate`, `fisher`, `experiment`.
//!
//! Exit codes: 0 success, 2 configuration or argument error, 3 I/O or
//! malformed input, 4 degenerate data (J = 0).

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::config::{Scheme, SimConfig};
use crate::error::{Error, Result};
use crate::estimator::mle;
use crate::experiments::{
    run_campaign, CampaignSpec, DataSource, ExperimentKind, REPORT_SCHEMA_VERSION,
};
use crate::io::{read_trajectory, write_report, write_trajectory, EstimateOutput};
use crate::moments::{fisher_asymptotic, fisher_exact};
use crate::rng::GENERATOR_VERSION;
use crate::sim::simulate;

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_DEGENERATE: i32 = 4;

const VERSION: &str = concat!(
    env!("CARGO_PKG_VERSION"),
    " (report schema 1, trajectory schema 1, generator 1)"
);

/// JSON configuration file. Physical parameters are mandatory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CliConfig {
    pub lambda: f64,
    pub sigma: f64,
    pub n_modes: usize,
    pub m_steps: usize,
    pub t_final: f64,
    #[serde(default)]
    pub scheme: Scheme,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub parallelism: Option<usize>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub replications: Option<usize>,
    #[serde(default)]
    pub sweep: Option<Vec<usize>>,
    #[serde(default)]
    pub source: DataSource,
}

impl CliConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let cfg: CliConfig = serde_json::from_str(&text).map_err(|e| Error::Config {
            field: "config",
            message: format!("{}: {e}", path.display()),
        })?;
        cfg.sim_config().validate()?;
        Ok(cfg)
    }

    pub fn sim_config(&self) -> SimConfig {
        SimConfig {
            lambda: self.lambda,
            sigma: self.sigma,
            n_modes: self.n_modes,
            m_steps: self.m_steps,
            t_final: self.t_final,
            scheme: self.scheme,
            base_seed: self.base_seed,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "stochwave", version = VERSION, about = "Stochastic wave equation: spectral simulation and MLE of the wave speed")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CampaignKind {
    Consistency,
    Normality,
    Rates,
}

impl From<CampaignKind> for ExperimentKind {
    fn from(k: CampaignKind) -> Self {
        match k {
            CampaignKind::Consistency => ExperimentKind::ConsistencySweep,
            CampaignKind::Normality => ExperimentKind::Normality,
            CampaignKind::Rates => ExperimentKind::RateCheck,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate Fourier modes and write a trajectory CSV plus `<out>.json` sidecar.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Estimate lambda from a trajectory CSV; prints JSON on stdout.
    Estimate {
        #[arg(long)]
        traj: PathBuf,
        #[arg(long = "true-lambda")]
        true_lambda: Option<f64>,
    },
    /// Exact and asymptotic Fisher information.
    Fisher {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        lambda: f64,
        /// Cancels out of the Fisher information; validated only.
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
    },
    /// Run a Monte-Carlo campaign and write report files.
    Experiment {
        kind: CampaignKind,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        reps: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Comma-separated mode counts (consistency) or step counts (rates).
        #[arg(long, value_delimiter = ',')]
        sweep: Option<Vec<usize>>,
    },
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config { .. }
        | Error::Domain(_)
        | Error::Sizing { .. }
        | Error::MissingNoise
        | Error::MissingTruth => EXIT_CONFIG,
        Error::Io { .. } | Error::Format { .. } | Error::Data(_) | Error::Json(_) => EXIT_IO,
        Error::Degenerate => EXIT_DEGENERATE,
        Error::Replication { source, .. } => exit_code(source),
    }
}

/// Mode counts 5, 10, ... up to N (N itself always included).
pub fn default_consistency_sweep(n_modes: usize) -> Vec<usize> {
    if n_modes < 5 {
        return (1..=n_modes).collect();
    }
    let mut sweep: Vec<usize> = (1..=n_modes / 5).map(|j| 5 * j).collect();
    if n_modes % 5 != 0 {
        sweep.push(n_modes);
    }
    sweep
}

/// Coarse grids M_ref/128, /64, /32, /16 that divide M_ref exactly.
pub fn default_rate_sweep(m_ref: usize) -> Vec<usize> {
    [128, 64, 32, 16]
        .iter()
        .filter(|&&d| m_ref % d == 0)
        .map(|&d| m_ref / d)
        .collect()
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate { config, seed, out } => cmd_simulate(&config, seed, &out),
        Command::Estimate { traj, true_lambda } => cmd_estimate(&traj, true_lambda),
        Command::Fisher {
            n,
            t,
            lambda,
            sigma,
        } => cmd_fisher(n, t, lambda, sigma),
        Command::Experiment {
            kind,
            config,
            reps,
            seed,
            threads,
            out,
            sweep,
        } => cmd_experiment(kind.into(), &config, reps, seed, threads, out, sweep),
    }
}

pub fn cmd_simulate(config: &Path, seed: Option<u64>, out: &Path) -> Result<()> {
    let mut sim = CliConfig::load(config)?.sim_config();
    if let Some(seed) = seed {
        sim.base_seed = seed;
    }
    let traj = simulate(&sim, 0)?;
    write_trajectory(out, &traj)
}

pub fn cmd_estimate(traj: &Path, true_lambda: Option<f64>) -> Result<()> {
    let traj = read_trajectory(traj)?;
    let est = mle(&traj, true_lambda)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&EstimateOutput::from(&est))?
    );
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FisherOutput {
    pub exact: f64,
    pub asymptotic: f64,
    pub ratio: f64,
}

pub fn cmd_fisher(n: usize, t: f64, lambda: f64, sigma: f64) -> Result<()> {
    let exact = fisher_exact(n, t, lambda, sigma)?;
    let asymptotic = fisher_asymptotic(n, t, lambda)?;
    let out = FisherOutput {
        exact,
        asymptotic,
        ratio: exact / asymptotic,
    };
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(())
}

pub fn campaign_from_config(
    kind: ExperimentKind,
    cfg: &CliConfig,
    reps: Option<usize>,
    seed: Option<u64>,
    threads: Option<usize>,
    sweep: Option<Vec<usize>>,
) -> Result<CampaignSpec> {
    let mut sim = cfg.sim_config();
    if let Some(seed) = seed {
        sim.base_seed = seed;
    }
    let replications = reps
        .or(cfg.replications)
        .ok_or_else(|| Error::config("replications", "give --reps or set it in the config"))?;
    let sweep = sweep
        .or_else(|| cfg.sweep.clone())
        .unwrap_or_else(|| match kind {
            ExperimentKind::ConsistencySweep => default_consistency_sweep(sim.n_modes),
            ExperimentKind::RateCheck => default_rate_sweep(sim.m_steps),
            ExperimentKind::Normality => Vec::new(),
        });
    let mut spec = CampaignSpec::new(sim, kind, replications)
        .with_sweep(sweep)
        .with_source(cfg.source);
    spec.threads = threads.or(cfg.parallelism);
    spec.validate()?;
    Ok(spec)
}

pub fn cmd_experiment(
    kind: ExperimentKind,
    config: &Path,
    reps: Option<usize>,
    seed: Option<u64>,
    threads: Option<usize>,
    out: Option<PathBuf>,
    sweep: Option<Vec<usize>>,
) -> Result<()> {
    let cfg = CliConfig::load(config)?;
    let out = out
        .or_else(|| cfg.output_dir.clone())
        .ok_or_else(|| Error::config("output_dir", "give --out or set it in the config"))?;
    let spec = campaign_from_config(kind, &cfg, reps, seed, threads, sweep)?;
    let report = run_campaign(&spec)?;
    write_report(&out, &report)?;

    let mut line = format!(
        "{kind:?}: {} records, seed {}",
        report.records.len(),
        spec.sim.base_seed
    );
    if let Some(s) = &report.lambda_summary {
        line.push_str(&format!(", lambda_hat mean {:.6}", s.mean));
    }
    if let Some(ks) = &report.ks {
        line.push_str(&format!(", KS D {:.4} p {:.4}", ks.d_stat, ks.p_value));
    }
    if let Some(slope) = report.rate_slope_j {
        line.push_str(&format!(", slope(mse_j) {slope:.3}"));
    }
    line.push_str(&format!(
        " [schema {REPORT_SCHEMA_VERSION}, generator {GENERATOR_VERSION}] -> {}",
        out.display()
    ));
    println!("{line}");
    Ok(())
}

/// Parses arguments, runs, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { 0 };
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_sweeps() {
        assert_eq!(default_consistency_sweep(100).len(), 20);
        assert_eq!(default_consistency_sweep(12), vec![5, 10, 12]);
        assert_eq!(default_consistency_sweep(3), vec![1, 2, 3]);
        assert_eq!(default_rate_sweep(64_000), vec![500, 1000, 2000, 4000]);
        assert!(default_rate_sweep(7).is_empty());
    }

    #[test]
    fn exit_codes_partition_errors() {
        assert_eq!(exit_code(&Error::config("lambda", "x")), EXIT_CONFIG);
        assert_eq!(exit_code(&Error::Degenerate), EXIT_DEGENERATE);
        assert_eq!(exit_code(&Error::format("f", "x")), EXIT_IO);
        let nested = Error::Replication {
            seed: 1,
            source: Box::new(Error::Degenerate),
        };
        assert_eq!(exit_code(&nested), EXIT_DEGENERATE);
    }

    #[test]
    fn config_requires_physical_parameters() {
        let err =
            serde_json::from_str::<CliConfig>(r#"{"sigma":1,"n_modes":3,"m_steps":5,"t_final":1}"#)
                .unwrap_err();
        assert!(err.to_string().contains("lambda"));
    }

    #[test]
    fn campaign_needs_replications() {
        let cfg: CliConfig =
            serde_json::from_str(r#"{"lambda":1,"sigma":1,"n_modes":3,"m_steps":5,"t_final":1}"#)
                .unwrap();
        let err = campaign_from_config(
            ExperimentKind::ConsistencySweep,
            &cfg,
            None,
            None,
            None,
            None,
        )
        .unwrap_err();
        assert!(matches!(
            err,
            Error::Config {
                field: "replications",
                ..
            }
        ));
        let spec = campaign_from_config(
            ExperimentKind::ConsistencySweep,
            &cfg,
            Some(2),
            Some(9),
            Some(1),
            None,
        )
        .unwrap();
        assert_eq!(spec.sim.base_seed, 9);
        assert_eq!(spec.sweep, vec![1, 2, 3]);
    }
}
