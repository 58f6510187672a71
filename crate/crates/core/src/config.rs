use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// Explicit Euler on the (u, v) oscillator system.
    #[default]
    Euler,
    /// Exact Gaussian transition of each linear oscillator.
    Exact,
}

/// Physical and numerical parameters of one simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub lambda: f64,
    pub sigma: f64,
    pub n_modes: usize,
    pub m_steps: usize,
    pub t_final: f64,
    #[serde(default)]
    pub scheme: Scheme,
    #[serde(default)]
    pub base_seed: u64,
}

impl SimConfig {
    pub fn new(lambda: f64, sigma: f64, n_modes: usize, m_steps: usize, t_final: f64) -> Self {
        Self {
            lambda,
            sigma,
            n_modes,
            m_steps,
            t_final,
            scheme: Scheme::Euler,
            base_seed: 0,
        }
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_seed(mut self, base_seed: u64) -> Self {
        self.base_seed = base_seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return Err(Error::config(
                "lambda",
                format!("must be positive and finite, got {}", self.lambda),
            ));
        }
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(Error::config(
                "sigma",
                format!("must be positive and finite, got {}", self.sigma),
            ));
        }
        if self.n_modes == 0 {
            return Err(Error::config("n_modes", "must be at least 1"));
        }
        if self.m_steps == 0 {
            return Err(Error::config("m_steps", "must be at least 1"));
        }
        if !(self.t_final.is_finite() && self.t_final > 0.0) {
            return Err(Error::config(
                "t_final",
                format!("must be positive and finite, got {}", self.t_final),
            ));
        }
        let dt = self.dt();
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::config(
                "m_steps",
                format!("step size t_final / m_steps = {dt} is not positive"),
            ));
        }
        Ok(())
    }

    /// Uniform step T / M.
    pub fn dt(&self) -> f64 {
        self.t_final / self.m_steps as f64
    }

    /// Grid t_i = i T / M for i = 0..=M, with the last point pinned to T.
    pub fn grid(&self) -> Vec<f64> {
        let m = self.m_steps;
        let mut grid: Vec<f64> = (0..=m)
            .map(|i| i as f64 * self.t_final / m as f64)
            .collect();
        grid[m] = self.t_final;
        grid
    }
}
