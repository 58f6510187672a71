//! Spectral simulation of the stochastic wave equation
//! `u_tt = lambda u_xx + sigma W'` on `(0, pi)` and maximum-likelihood
//! estimation of the wave-speed parameter `lambda` from its Fourier modes.
//!
//! - [`sim`]: Euler and exact-transition samplers of the mode oscillators,
//!   field reconstruction.
//! - [`moments`]: closed-form second moments, Fisher information,
//!   normalizing constants.
//! - [`estimator`]: left-endpoint sufficient statistics and `lambda_hat = B / J`.
//! - [`stats`]: normal CDF, Kolmogorov-Smirnov test, summaries, histograms.
//! - [`experiments`]: seeded, parallel Monte-Carlo campaigns.
//! - [`io`]: trajectory CSV, estimate JSON, report directories.
//!
//! ```
//! use stochwave::{estimator::mle, sim::simulate, SimConfig};
//!
//! let cfg = SimConfig::new(2.0, 1.0, 30, 2000, 1.0).with_seed(7);
//! let traj = simulate(&cfg, 0).unwrap();
//! let est = mle(&traj, Some(2.0)).unwrap();
//! assert!((est.lambda_hat - 2.0).abs() < 0.5);
//! ```

pub mod cli;
pub mod config;
pub mod error;
pub mod estimator;
pub mod experiments;
pub mod io;
pub mod moments;
pub mod rng;
pub mod sim;
pub mod stats;

pub use config::{Scheme, SimConfig};
pub use error::{Error, Result};
pub use estimator::{Estimate, SufficientStats};
pub use experiments::{CampaignSpec, DataSource, ExperimentKind, ExperimentReport};
pub use sim::{FieldSlice, TrajectorySet};
