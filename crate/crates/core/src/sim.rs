//! Fourier-mode simulation of the stochastic wave equation
//! `u_tt = lambda u_xx + sigma W'` on (0, pi) with zero boundary values and
//! zero initial data.
//!
//! Projecting onto `sqrt(2/pi) sin(kx)` leaves independent oscillators
//! `du_k = v_k dt`, `dv_k = -lambda k^2 u_k dt + sigma dw_k`. Two samplers are
//! provided: the explicit Euler recursion, which also records the Brownian
//! increments so the noise functional can be evaluated, and the exact
//! Gaussian transition of each oscillator, used as a reference.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{Scheme, SimConfig};
use crate::error::{Error, Result};
use crate::moments::{cross_moment_uv, mean_square_u, mean_square_v, ModeContext};
use crate::rng::GaussianStream;

/// Sampled mode paths on the uniform grid. Row `k - 1` holds mode `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySet {
    pub config: SimConfig,
    pub replication: u64,
    pub grid: Vec<f64>,
    pub u: Vec<Vec<f64>>,
    pub v: Vec<Vec<f64>>,
    /// Brownian increments `w_k(t_i) - w_k(t_{i-1})`, `i = 1..=M`; synthetic data only.
    pub dw: Option<Vec<Vec<f64>>>,
}

impl TrajectorySet {
    /// Assembles a trajectory from raw arrays, checking shapes, the zero
    /// initial state and finiteness.
    pub fn from_parts(
        config: SimConfig,
        u: Vec<Vec<f64>>,
        v: Vec<Vec<f64>>,
        dw: Option<Vec<Vec<f64>>>,
    ) -> Result<Self> {
        config.validate()?;
        let traj = Self {
            grid: config.grid(),
            config,
            replication: 0,
            u,
            v,
            dw,
        };
        traj.check()?;
        Ok(traj)
    }

    pub fn check(&self) -> Result<()> {
        let n = self.config.n_modes;
        let cols = self.config.m_steps + 1;
        if self.grid.len() != cols {
            return Err(Error::Data(format!(
                "grid has {} points, expected {cols}",
                self.grid.len()
            )));
        }
        if self.u.len() != n || self.v.len() != n {
            return Err(Error::Data(format!(
                "expected {n} modes, got {} u rows and {} v rows",
                self.u.len(),
                self.v.len()
            )));
        }
        for (idx, (u, v)) in self.u.iter().zip(&self.v).enumerate() {
            let k = idx + 1;
            if u.len() != cols || v.len() != cols {
                return Err(Error::Data(format!("mode {k}: expected {cols} columns")));
            }
            if u[0] != 0.0 || v[0] != 0.0 {
                return Err(Error::Data(format!("mode {k}: initial state is not zero")));
            }
            if let Some(bad) = u.iter().chain(v).position(|x| !x.is_finite()) {
                return Err(Error::Data(format!(
                    "mode {k}: non-finite value at flat index {bad}"
                )));
            }
        }
        if let Some(dw) = &self.dw {
            if dw.len() != n || dw.iter().any(|row| row.len() != cols - 1) {
                return Err(Error::Data("dw shape does not match N x M".into()));
            }
            if dw.iter().flatten().any(|x| !x.is_finite()) {
                return Err(Error::Data("non-finite noise increment".into()));
            }
        }
        Ok(())
    }

    pub fn n_modes(&self) -> usize {
        self.u.len()
    }

    pub fn m_steps(&self) -> usize {
        self.grid.len() - 1
    }

    pub fn dt(&self) -> f64 {
        self.config.dt()
    }
}

/// Truncated sine series of u and v at one grid time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSlice {
    pub t: f64,
    pub x_grid: Vec<f64>,
    pub values_u: Vec<f64>,
    pub values_v: Vec<f64>,
}

fn check_size(config: &SimConfig) -> Result<()> {
    let columns = config.m_steps.saturating_add(1);
    // u, v and dw, 8 bytes each
    let fits = config
        .n_modes
        .checked_mul(columns)
        .and_then(|cells| cells.checked_mul(3 * std::mem::size_of::<f64>()))
        .is_some_and(|bytes| bytes <= isize::MAX as usize);
    if fits {
        Ok(())
    } else {
        Err(Error::Sizing {
            n_modes: config.n_modes,
            columns,
        })
    }
}

/// Simulates replication `replication` with the scheme named in `config`.
pub fn simulate(config: &SimConfig, replication: u64) -> Result<TrajectorySet> {
    match config.scheme {
        Scheme::Euler => simulate_euler(config, replication),
        Scheme::Exact => simulate_exact(config, replication),
    }
}

/// Euler scheme. Each mode draws its increments from its own stream keyed by
/// `(base_seed, replication, k)`.
pub fn simulate_euler(config: &SimConfig, replication: u64) -> Result<TrajectorySet> {
    config.validate()?;
    check_size(config)?;
    let m = config.m_steps;
    let sqrt_dt = config.dt().sqrt();
    let dw: Vec<Vec<f64>> = (1..=config.n_modes)
        .into_par_iter()
        .map(|k| {
            let mut g = GaussianStream::for_mode(config.base_seed, replication, k);
            (0..m).map(|_| sqrt_dt * g.next_normal()).collect()
        })
        .collect();
    let mut traj = euler_paths(config, dw)?;
    traj.replication = replication;
    Ok(traj)
}

/// Euler scheme driven by caller-supplied Brownian increments (`N` rows of
/// `M` values).
pub fn simulate_euler_with_increments(
    config: &SimConfig,
    dw: Vec<Vec<f64>>,
) -> Result<TrajectorySet> {
    config.validate()?;
    check_size(config)?;
    if dw.len() != config.n_modes || dw.iter().any(|row| row.len() != config.m_steps) {
        return Err(Error::Data("dw shape does not match N x M".into()));
    }
    euler_paths(config, dw)
}

fn euler_paths(config: &SimConfig, dw: Vec<Vec<f64>>) -> Result<TrajectorySet> {
    let dt = config.dt();
    let sigma = config.sigma;
    let (u, v): (Vec<_>, Vec<_>) = dw
        .par_iter()
        .enumerate()
        .map(|(idx, incr)| {
            let k = (idx + 1) as f64;
            euler_mode(config.lambda * (k * k), sigma, dt, incr)
        })
        .unzip();
    let traj = TrajectorySet {
        grid: config.grid(),
        config: config.clone(),
        replication: 0,
        u,
        v,
        dw: Some(dw),
    };
    if let Some(k) = traj
        .u
        .iter()
        .zip(&traj.v)
        .position(|(u, v)| !(u[u.len() - 1].is_finite() && v[v.len() - 1].is_finite()))
    {
        return Err(Error::Data(format!(
            "Euler recursion overflowed in mode {}",
            k + 1
        )));
    }
    Ok(traj)
}

/// One Euler path. `stiffness` is `lambda k^2`; the update is exactly
/// `u' = u + v dt`, `v' = v - stiffness u dt + sigma dw`.
pub fn euler_mode(stiffness: f64, sigma: f64, dt: f64, dw: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut u = Vec::with_capacity(dw.len() + 1);
    let mut v = Vec::with_capacity(dw.len() + 1);
    let (mut uc, mut vc) = (0.0f64, 0.0f64);
    u.push(uc);
    v.push(vc);
    for &d in dw {
        let un = uc + vc * dt;
        let vn = vc - stiffness * uc * dt + sigma * d;
        uc = un;
        vc = vn;
        u.push(uc);
        v.push(vc);
    }
    (u, v)
}

/// Covariance of the Gaussian increment of one oscillator over a step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepCovariance {
    pub uu: f64,
    pub uv: f64,
    pub vv: f64,
}

/// Exact step covariance `Q(dt)` for mode `ctx`. This is the second-moment
/// matrix of the state after one step from rest.
pub fn transition_cov(ctx: &ModeContext, dt: f64) -> Result<StepCovariance> {
    Ok(StepCovariance {
        uu: mean_square_u(ctx, dt)?,
        uv: cross_moment_uv(ctx, dt)?,
        vv: mean_square_v(ctx, dt)?,
    })
}

/// Exact one-step map of a mode: rotation by `ell dt` plus a correlated
/// Gaussian pair drawn through the Cholesky factor of [`StepCovariance`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactStep {
    cos: f64,
    sin_over_ell: f64,
    ell_sin: f64,
    l11: f64,
    l21: f64,
    l22: f64,
}

impl ExactStep {
    pub fn new(ctx: &ModeContext, dt: f64) -> Result<Self> {
        let q = transition_cov(ctx, dt)?;
        let angle = ctx.ell * dt;
        let (sin, cos) = angle.sin_cos();
        let (l11, l21, l22) = if q.uu > 0.0 {
            let l11 = q.uu.sqrt();
            let l21 = q.uv / l11;
            (l11, l21, (q.vv - l21 * l21).max(0.0).sqrt())
        } else {
            (0.0, 0.0, q.vv.max(0.0).sqrt())
        };
        Ok(Self {
            cos,
            sin_over_ell: sin / ctx.ell,
            ell_sin: ctx.ell * sin,
            l11,
            l21,
            l22,
        })
    }

    /// Deterministic part of the step.
    #[inline]
    pub fn propagate(&self, u: f64, v: f64) -> (f64, f64) {
        (
            u * self.cos + v * self.sin_over_ell,
            -u * self.ell_sin + v * self.cos,
        )
    }

    /// Full step given two independent standard normals.
    #[inline]
    pub fn step(&self, u: f64, v: f64, z1: f64, z2: f64) -> (f64, f64) {
        let (um, vm) = self.propagate(u, v);
        (um + self.l11 * z1, vm + self.l21 * z1 + self.l22 * z2)
    }
}

/// Exact Gaussian-transition sampler. No noise increments are recorded.
pub fn simulate_exact(config: &SimConfig, replication: u64) -> Result<TrajectorySet> {
    config.validate()?;
    check_size(config)?;
    let m = config.m_steps;
    let dt = config.dt();
    let steps: Vec<ExactStep> = (1..=config.n_modes)
        .map(|k| ExactStep::new(&ModeContext::new(k, config.lambda, config.sigma)?, dt))
        .collect::<Result<_>>()?;
    let (u, v): (Vec<_>, Vec<_>) = steps
        .par_iter()
        .enumerate()
        .map(|(idx, step)| {
            let mut g = GaussianStream::for_mode(config.base_seed, replication, idx + 1);
            let mut u = Vec::with_capacity(m + 1);
            let mut v = Vec::with_capacity(m + 1);
            let (mut uc, mut vc) = (0.0, 0.0);
            u.push(uc);
            v.push(vc);
            for _ in 0..m {
                let z1 = g.next_normal();
                let z2 = g.next_normal();
                (uc, vc) = step.step(uc, vc, z1, z2);
                u.push(uc);
                v.push(vc);
            }
            (u, v)
        })
        .unzip();
    Ok(TrajectorySet {
        grid: config.grid(),
        config: config.clone(),
        replication,
        u,
        v,
        dw: None,
    })
}

/// Evaluates `sqrt(2/pi) sum_k u_k(t) sin(k x)` (and the same for v) at
/// grid time `t_index`.
pub fn reconstruct_field(
    traj: &TrajectorySet,
    t_index: usize,
    x_grid: &[f64],
) -> Result<FieldSlice> {
    if t_index >= traj.grid.len() {
        return Err(Error::Domain(format!(
            "time index {t_index} outside 0..={}",
            traj.grid.len() - 1
        )));
    }
    let pi = std::f64::consts::PI;
    if let Some(x) = x_grid.iter().find(|x| !(0.0..=pi).contains(*x)) {
        return Err(Error::Domain(format!("position {x} outside [0, pi]")));
    }
    let norm = (2.0 / pi).sqrt();
    let mut values_u = Vec::with_capacity(x_grid.len());
    let mut values_v = Vec::with_capacity(x_grid.len());
    for &x in x_grid {
        if x == 0.0 || x == pi {
            values_u.push(0.0);
            values_v.push(0.0);
            continue;
        }
        let (mut su, mut sv) = (0.0, 0.0);
        for (idx, (u, v)) in traj.u.iter().zip(&traj.v).enumerate() {
            let s = ((idx + 1) as f64 * x).sin();
            su += u[t_index] * s;
            sv += v[t_index] * s;
        }
        values_u.push(norm * su);
        values_v.push(norm * sv);
    }
    Ok(FieldSlice {
        t: traj.grid[t_index],
        x_grid: x_grid.to_vec(),
        values_u,
        values_v,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zero_increments_give_zero_paths() {
        let cfg = SimConfig::new(1.0, 1.0, 1, 4, 1.0);
        let traj = simulate_euler_with_increments(&cfg, vec![vec![0.0; 4]]).unwrap();
        assert!(traj.u[0].iter().chain(&traj.v[0]).all(|&x| x == 0.0));
    }

    #[test]
    fn single_unit_increment() {
        let cfg = SimConfig::new(1.0, 1.0, 1, 1, 1.0);
        let traj = simulate_euler_with_increments(&cfg, vec![vec![1.0]]).unwrap();
        assert_eq!(traj.u[0][1], 0.0);
        assert_eq!(traj.v[0][1], 1.0);
    }

    #[test]
    fn euler_recursion_replays_exactly() {
        let cfg = SimConfig::new(10.0, 5.0, 100, 10_000, 1.0).with_seed(42);
        let traj = simulate_euler(&cfg, 0).unwrap();
        let dt = cfg.dt();
        let dw = traj.dw.as_ref().unwrap();
        let mut max_u = 0.0f64;
        let mut max_v = 0.0f64;
        for idx in 0..traj.n_modes() {
            let k = (idx + 1) as f64;
            let stiffness = cfg.lambda * (k * k);
            let (u, v) = (&traj.u[idx], &traj.v[idx]);
            for i in 0..cfg.m_steps {
                max_u = max_u.max((u[i + 1] - (u[i] + v[i] * dt)).abs());
                max_v = max_v.max(
                    (v[i + 1] - (v[i] - stiffness * u[i] * dt + cfg.sigma * dw[idx][i])).abs(),
                );
            }
        }
        assert_eq!(max_u, 0.0);
        assert_eq!(max_v, 0.0);
    }

    #[test]
    fn deterministic_and_mode_count_invariant() {
        let cfg = SimConfig::new(2.0, 1.0, 5, 50, 1.0).with_seed(9);
        let a = simulate_euler(&cfg, 3).unwrap();
        let b = simulate_euler(&cfg, 3).unwrap();
        assert_eq!(a, b);
        let mut wider = cfg.clone();
        wider.n_modes = 8;
        let c = simulate_euler(&wider, 3).unwrap();
        assert_eq!(&c.u[..5], &a.u[..]);
        let other = simulate_euler(&cfg, 4).unwrap();
        assert_ne!(other.u, a.u);

        let ex = cfg.clone().with_scheme(Scheme::Exact);
        assert_eq!(simulate(&ex, 1).unwrap(), simulate(&ex, 1).unwrap());
    }

    #[test]
    fn exact_sampler_initial_state_and_no_dw() {
        let cfg = SimConfig::new(1.0, 1.0, 3, 20, 2.0).with_scheme(Scheme::Exact);
        let traj = simulate(&cfg, 0).unwrap();
        assert!(traj.dw.is_none());
        traj.check().unwrap();
    }

    #[test]
    fn transition_cov_at_pi() {
        let ctx = ModeContext::new(1, 1.0, 1.0).unwrap();
        let q = transition_cov(&ctx, PI).unwrap();
        assert!((q.uu - PI / 2.0).abs() < 1e-14);
        assert!((q.vv - PI / 2.0).abs() < 1e-14);
        assert!(q.uv.abs() < 1e-30);
    }

    #[test]
    fn zero_step_is_identity() {
        let ctx = ModeContext::new(3, 2.0, 1.5).unwrap();
        let q = transition_cov(&ctx, 0.0).unwrap();
        assert_eq!((q.uu, q.uv, q.vv), (0.0, 0.0, 0.0));
        let step = ExactStep::new(&ctx, 0.0).unwrap();
        assert_eq!(step.step(0.7, -1.3, 2.0, -3.0), (0.7, -1.3));
    }

    #[test]
    fn cholesky_reproduces_covariance() {
        for (k, dt) in [(1, 0.1), (7, 1e-6), (30, 0.37), (2, 3.0)] {
            let ctx = ModeContext::new(k, 1.7, 0.6).unwrap();
            let q = transition_cov(&ctx, dt).unwrap();
            let s = ExactStep::new(&ctx, dt).unwrap();
            let uu = s.l11 * s.l11;
            let uv = s.l11 * s.l21;
            let vv = s.l21 * s.l21 + s.l22 * s.l22;
            assert!((uu - q.uu).abs() <= 1e-14 * q.uu);
            assert!((uv - q.uv).abs() <= 1e-14 * q.uv.abs());
            assert!((vv - q.vv).abs() <= 1e-12 * q.vv);
        }
    }

    #[test]
    fn sizing_error() {
        let cfg = SimConfig::new(1.0, 1.0, usize::MAX / 4, 10, 1.0);
        assert!(matches!(simulate_euler(&cfg, 0), Err(Error::Sizing { .. })));
        assert!(matches!(simulate_exact(&cfg, 0), Err(Error::Sizing { .. })));
    }

    #[test]
    fn rejects_invalid_config() {
        let cfg = SimConfig::new(f64::NAN, 1.0, 1, 10, 1.0);
        assert!(matches!(
            simulate(&cfg, 0),
            Err(Error::Config {
                field: "lambda",
                ..
            })
        ));
    }

    #[test]
    fn field_reconstruction() {
        let cfg = SimConfig::new(1.0, 1.0, 1, 1, 1.0);
        let traj =
            TrajectorySet::from_parts(cfg, vec![vec![0.0, 1.0]], vec![vec![0.0, -2.0]], None)
                .unwrap();
        let f = reconstruct_field(&traj, 1, &[0.0, PI / 2.0, PI]).unwrap();
        let norm = (2.0 / PI).sqrt();
        assert_eq!(f.values_u, vec![0.0, norm, 0.0]);
        assert_eq!(f.values_v, vec![0.0, -2.0 * norm, 0.0]);
        assert_eq!(f.t, 1.0);
        assert!(reconstruct_field(&traj, 2, &[0.1]).is_err());
        assert!(reconstruct_field(&traj, 0, &[-0.1]).is_err());
        assert!(reconstruct_field(&traj, 0, &[3.2]).is_err());
    }

    #[test]
    fn from_parts_rejects_bad_data() {
        let cfg = SimConfig::new(1.0, 1.0, 1, 1, 1.0);
        let nonzero_start = TrajectorySet::from_parts(
            cfg.clone(),
            vec![vec![1.0, 1.0]],
            vec![vec![0.0, 0.0]],
            None,
        );
        assert!(matches!(nonzero_start, Err(Error::Data(_))));
        let nan = TrajectorySet::from_parts(
            cfg.clone(),
            vec![vec![0.0, f64::NAN]],
            vec![vec![0.0, 0.0]],
            None,
        );
        assert!(matches!(nan, Err(Error::Data(_))));
        let shape = TrajectorySet::from_parts(cfg, vec![vec![0.0]], vec![vec![0.0, 0.0]], None);
        assert!(matches!(shape, Err(Error::Data(_))));
    }
}
