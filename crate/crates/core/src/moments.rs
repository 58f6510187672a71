//! Closed-form second moments of the Fourier modes, Fisher information and
//! normalizing constants.
//!
//! Mode k of the noise-driven wave equation is the oscillator
//! `du = v dt`, `dv = -ell^2 u dt + sigma dw` with `ell = sqrt(lambda) k`,
//! started from rest. All moments below are Ito-isometry integrals of its
//! impulse response `sin(ell (t - s)) / ell`.
//!
//! Differences such as `y - sin(y)` lose all precision when `y` is small, so
//! every formula is arranged to go through [`y_minus_sin`], which switches to
//! its Taylor series below `|y| = 1`.

use crate::error::{Error, Result};

/// Frequency data of one Fourier mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeContext {
    pub k: usize,
    pub lambda: f64,
    pub sigma: f64,
    /// Angular frequency `sqrt(lambda) * k`.
    pub ell: f64,
}

impl ModeContext {
    pub fn new(k: usize, lambda: f64, sigma: f64) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("mode index k must be >= 1".into()));
        }
        check_positive("lambda", lambda)?;
        check_positive("sigma", sigma)?;
        Ok(Self {
            k,
            lambda,
            sigma,
            ell: lambda.sqrt() * k as f64,
        })
    }
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{name} must be positive and finite, got {x}"
        )))
    }
}

fn check_time(name: &str, t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{name} must be finite and >= 0, got {t}"
        )))
    }
}

/// `y - sin(y)` without cancellation near zero.
pub fn y_minus_sin(y: f64) -> f64 {
    if y.abs() >= 1.0 {
        return y - y.sin();
    }
    // y^3/3! - y^5/5! + y^7/7! - ...
    let y2 = y * y;
    let mut term = y * y2 / 6.0;
    let mut sum = term;
    let mut n = 3.0;
    while term.abs() > f64::EPSILON * 1e-3 * sum.abs() {
        term *= -y2 / ((n + 1.0) * (n + 2.0));
        sum += term;
        n += 2.0;
    }
    sum
}

/// E u_k(t)^2 = (sigma^2 / ell^2) (t/2 - sin(2 ell t) / (4 ell)).
pub fn mean_square_u(ctx: &ModeContext, t: f64) -> Result<f64> {
    check_time("t", t)?;
    let ell = ctx.ell;
    Ok(ctx.sigma * ctx.sigma * y_minus_sin(2.0 * ell * t) / (4.0 * ell * ell * ell))
}

/// E v_k(t)^2 = sigma^2 (t/2 + sin(2 ell t) / (4 ell)).
pub fn mean_square_v(ctx: &ModeContext, t: f64) -> Result<f64> {
    check_time("t", t)?;
    let y = 2.0 * ctx.ell * t;
    Ok(ctx.sigma * ctx.sigma * (y + y.sin()) / (4.0 * ctx.ell))
}

/// E u_k(t) v_k(t) = sigma^2 sin^2(ell t) / (2 ell^2).
pub fn cross_moment_uv(ctx: &ModeContext, t: f64) -> Result<f64> {
    check_time("t", t)?;
    let s = (ctx.ell * t).sin();
    Ok(ctx.sigma * ctx.sigma * s * s / (2.0 * ctx.ell * ctx.ell))
}

/// E u_k(t) u_k(s), symmetric in its time arguments.
///
/// With `a = ell min(t,s)` and `b = ell |t - s|` the textbook form
/// `(sigma^2/2ell^2)[t cos b + (sin b - sin(2a + b)) / (2 ell)]` equals
/// `(sigma^2/2ell^3)[cos b (a - sin a cos a) + sin^2 a sin b]`, which is the
/// one evaluated here.
pub fn cov_u(ctx: &ModeContext, t: f64, s: f64) -> Result<f64> {
    check_time("t", t)?;
    check_time("s", s)?;
    let (lo, hi) = if t <= s { (t, s) } else { (s, t) };
    let ell = ctx.ell;
    let a = ell * lo;
    let b = ell * (hi - lo);
    let sa = a.sin();
    let bracket = b.cos() * 0.5 * y_minus_sin(2.0 * a) + sa * sa * b.sin();
    Ok(ctx.sigma * ctx.sigma * bracket / (2.0 * ell * ell * ell))
}

fn check_fisher_args(n_modes: usize, t_final: f64, lambda: f64) -> Result<()> {
    if n_modes == 0 {
        return Err(Error::Domain("N must be >= 1".into()));
    }
    check_positive("T", t_final)?;
    check_positive("lambda", lambda)
}

/// Fisher information of the continuously observed N-mode system,
/// `(1/sigma^2) E J_{N,T} = sum_k k^4 / ell_k^2 (T^2/4 + (cos(2 ell_k T) - 1) / (8 ell_k^2))`.
///
/// The sigma factors cancel; `sigma` is validated but does not change the
/// value.
pub fn fisher_exact(n_modes: usize, t_final: f64, lambda: f64, sigma: f64) -> Result<f64> {
    check_fisher_args(n_modes, t_final, lambda)?;
    check_positive("sigma", sigma)?;
    // k^4/ell^2 * (x^2 - sin^2 x)/(4 ell^2) with x = ell T, and k^4/ell^4 = 1/lambda^2.
    let root = lambda.sqrt();
    let scale = 1.0 / (4.0 * lambda * lambda);
    let mut sum = 0.0;
    let mut comp = 0.0;
    for k in 1..=n_modes {
        let x = root * k as f64 * t_final;
        let term = y_minus_sin(x) * (x + x.sin()) * scale;
        // Kahan summation; terms grow like k^2.
        let y = term - comp;
        let next = sum + y;
        comp = (next - sum) - y;
        sum = next;
    }
    Ok(sum)
}

/// Large-N equivalent `N^3 T^2 / (12 lambda)` of [`fisher_exact`].
pub fn fisher_asymptotic(n_modes: usize, t_final: f64, lambda: f64) -> Result<f64> {
    check_fisher_args(n_modes, t_final, lambda)?;
    let n = n_modes as f64;
    Ok(n * n * n * t_final * t_final / (12.0 * lambda))
}

/// Normalizing constant `sqrt(T^2 / (12 lambda))`.
pub fn upsilon(t_final: f64, lambda: f64) -> Result<f64> {
    check_positive("T", t_final)?;
    check_positive("lambda", lambda)?;
    Ok(t_final / (12.0 * lambda).sqrt())
}
