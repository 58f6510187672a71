//! Standard normal CDF, one-sample Kolmogorov-Smirnov test against it, and
//! small sample summaries.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Standard normal distribution function.
///
/// Evaluated as `erfc(|x| / sqrt 2) / 2` on the lower tail (libm's erfc,
/// accurate to about one ulp deep into the tail) and reflected for `x > 0`,
/// so `cdf(x) + cdf(-x) == 1` up to one rounding.
pub fn std_normal_cdf(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::Domain("normal CDF of NaN".into()));
    }
    let lower = 0.5 * libm::erfc(x.abs() / std::f64::consts::SQRT_2);
    Ok(if x <= 0.0 { lower } else { 1.0 - lower })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub d_stat: f64,
    pub p_value: f64,
    pub n: usize,
}

/// Kolmogorov survival function `P(K > x) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 x^2)`.
///
/// For small `x` the alternating series converges slowly, so the equivalent
/// theta-function form `1 - sqrt(2 pi)/x sum_{j>=1} exp(-(2j-1)^2 pi^2 / (8 x^2))`
/// is used there instead.
pub fn kolmogorov_survival(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    let p = if x < 1.0 {
        let pi2 = std::f64::consts::PI * std::f64::consts::PI;
        let mut sum = 0.0;
        for j in 1..=50 {
            let odd = (2 * j - 1) as f64;
            let term = (-odd * odd * pi2 / (8.0 * x * x)).exp();
            sum += term;
            if term < 1e-17 {
                break;
            }
        }
        1.0 - (2.0 * std::f64::consts::PI).sqrt() / x * sum
    } else {
        let mut sum = 0.0;
        let mut sign = 1.0;
        for j in 1..=100 {
            let jf = j as f64;
            let term = (-2.0 * jf * jf * x * x).exp();
            sum += sign * term;
            if term < 1e-10 {
                break;
            }
            sign = -sign;
        }
        2.0 * sum
    };
    p.clamp(0.0, 1.0)
}

/// One-sample KS test of `samples` against the standard normal. The p-value
/// uses the asymptotic distribution of `sqrt(n) D`.
pub fn ks_test(samples: &[f64]) -> Result<KsResult> {
    if samples.is_empty() {
        return Err(Error::Domain("KS test on an empty sample".into()));
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain(
            "KS test sample contains non-finite values".into(),
        ));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = std_normal_cdf(x)?;
        let above = (i + 1) as f64 / n - f;
        let below = f - i as f64 / n;
        d = d.max(above).max(below);
    }
    let d = d.clamp(0.0, 1.0);
    Ok(KsResult {
        d_stat: d,
        p_value: kolmogorov_survival(n.sqrt() * d),
        n: sorted.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    /// Unbiased (n - 1) sample variance.
    pub variance: f64,
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

pub fn summarize(samples: &[f64]) -> Result<Summary> {
    if samples.len() < 2 {
        return Err(Error::Domain(format!(
            "variance needs at least 2 samples, got {}",
            samples.len()
        )));
    }
    let min = samples.iter().copied().fold(f64::INFINITY, f64::min);
    let max = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let n = samples.len() as f64;
    if min == max {
        return Ok(Summary {
            mean: min,
            variance: 0.0,
            min,
            max,
            n: samples.len(),
        });
    }
    let mean = samples.iter().sum::<f64>() / n;
    let ss: f64 = samples.iter().map(|x| (x - mean) * (x - mean)).sum();
    Ok(Summary {
        mean,
        variance: ss / (n - 1.0),
        min,
        max,
        n: samples.len(),
    })
}

/// Fixed-width histogram over the half-open range `[lo, hi)`, bins `[e_j, e_{j+1})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub below: u64,
    pub above: u64,
}

pub fn histogram(samples: &[f64], n_bins: usize, lo: f64, hi: f64) -> Result<Histogram> {
    if n_bins == 0 {
        return Err(Error::Domain("histogram needs at least one bin".into()));
    }
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::Domain(format!(
            "invalid histogram range [{lo}, {hi})"
        )));
    }
    let edges: Vec<f64> = (0..=n_bins)
        .map(|j| {
            if j == n_bins {
                hi
            } else {
                lo + (hi - lo) * j as f64 / n_bins as f64
            }
        })
        .collect();
    let mut counts = vec![0u64; n_bins];
    let (mut below, mut above) = (0, 0);
    for &x in samples {
        if x.is_nan() {
            return Err(Error::Domain("histogram sample is NaN".into()));
        }
        if x < lo {
            below += 1;
            continue;
        }
        if x >= hi {
            above += 1;
            continue;
        }
        let mut idx = (((x - lo) / (hi - lo)) * n_bins as f64) as usize;
        idx = idx.min(n_bins - 1);
        // the float guess can land one bin off at an edge
        while idx > 0 && x < edges[idx] {
            idx -= 1;
        }
        while idx + 1 < n_bins && x >= edges[idx + 1] {
            idx += 1;
        }
        counts[idx] += 1;
    }
    Ok(Histogram {
        edges,
        counts,
        below,
        above,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cdf_basics() {
        assert_eq!(std_normal_cdf(0.0).unwrap(), 0.5);
        assert!((std_normal_cdf(1.959964).unwrap() - 0.975).abs() < 1e-6);
        let tail = std_normal_cdf(-8.0).unwrap();
        assert!(tail > 0.0 && tail < 1e-14);
        assert!(std_normal_cdf(f64::NAN).is_err());
        assert_eq!(std_normal_cdf(f64::INFINITY).unwrap(), 1.0);
    }

    #[test]
    fn cdf_symmetry_and_monotonicity() {
        let mut prev = 0.0;
        let mut x = -8.0;
        while x <= 8.0 {
            let p = std_normal_cdf(x).unwrap();
            let q = std_normal_cdf(-x).unwrap();
            assert!((p + q - 1.0).abs() <= 1e-15, "x={x}");
            assert!(p >= prev, "x={x}");
            prev = p;
            x += 0.001;
        }
    }

    #[test]
    fn ks_single_point() {
        let r = ks_test(&[0.0]).unwrap();
        assert_eq!(r.d_stat, 0.5);
        assert_eq!(r.n, 1);
        assert!(ks_test(&[]).is_err());
        assert!(ks_test(&[f64::NAN]).is_err());
    }

    #[test]
    fn kolmogorov_survival_reference_points() {
        // classic critical values: P(K > 1.3581) = 0.05, P(K > 1.6276) = 0.01
        assert!((kolmogorov_survival(1.3581) - 0.05).abs() < 1e-4);
        assert!((kolmogorov_survival(1.6276) - 0.01).abs() < 1e-4);
        assert_eq!(kolmogorov_survival(0.0), 1.0);
        assert!(kolmogorov_survival(0.2) > 0.999_99);
        // both branches agree where they meet
        let a = kolmogorov_survival(1.0 - 1e-12);
        let b = kolmogorov_survival(1.0);
        assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn summaries() {
        let s = summarize(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!((s.mean, s.variance), (1.0, 0.0));
        let s = summarize(&[0.1, 0.1, 0.1]).unwrap();
        assert_eq!((s.mean, s.variance), (0.1, 0.0));
        let s = summarize(&[0.0, 2.0]).unwrap();
        assert_eq!((s.mean, s.variance, s.min, s.max), (1.0, 2.0, 0.0, 2.0));
        let s = summarize(&[-1.0, 0.0, 1.0]).unwrap();
        assert_eq!((s.mean, s.variance, s.n), (0.0, 1.0, 3));
        assert!(summarize(&[1.0]).is_err());
    }

    #[test]
    fn histogram_conventions() {
        let h = histogram(&[0.5], 1, 0.0, 1.0).unwrap();
        assert_eq!(h.counts, vec![1]);
        let h = histogram(&[], 4, -1.0, 1.0).unwrap();
        assert_eq!(h.counts, vec![0; 4]);
        let h = histogram(&[0.5, 0.0, 1.0, -0.1, 0.25], 4, 0.0, 1.0).unwrap();
        assert_eq!(h.counts, vec![1, 1, 1, 0]);
        assert_eq!((h.below, h.above), (1, 1));
        let h = histogram(&[0.3], 10, 0.0, 1.0).unwrap();
        assert_eq!(h.counts[3], 1, "edge value goes to the right bin");
        assert!(histogram(&[0.0], 0, 0.0, 1.0).is_err());
        assert!(histogram(&[0.0], 3, 1.0, 1.0).is_err());
    }
}
