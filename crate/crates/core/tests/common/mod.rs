#![allow(dead_code)]

//! Test-only oracles, kept independent of the library's closed forms.

use stochwave::rng::SplitMix64;

// Gauss-Kronrod 15-point rule (QUADPACK qk15): Kronrod abscissae and
// weights, and the embedded 7-point Gauss weights at the odd abscissae.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_553,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_41,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];

fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut abs = WGK[7] * fc.abs();
    for j in 0..7 {
        let dx = h * XGK[j];
        let (f1, f2) = (f(c - dx), f(c + dx));
        kron += WGK[j] * (f1 + f2);
        abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    (kron * h, (kron - gauss).abs() * h, abs * h.abs())
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

/// Globally adaptive Gauss-Kronrod integral of `f` over `[a, b]`.
///
/// The panel with the largest error estimate is bisected until the summed
/// estimate is below `min(1e-13, 1e-15 * L1)`, `L1` being the integral of
/// `|f|`, so tiny integrals keep their relative accuracy. Panels whose
/// estimate is at rounding level are not refined further.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    // start from 64 panels so high-frequency integrands are resolved
    let start = 64;
    let h = (b - a) / start as f64;
    let mut l1 = 0.0;
    let mut panels = Vec::new();
    let push = |panels: &mut Vec<Panel>, lo: f64, hi: f64| -> f64 {
        let (value, err, abs) = gk15(&f, lo, hi);
        let err = if err <= 50.0 * f64::EPSILON * abs {
            0.0
        } else {
            err
        };
        panels.push(Panel {
            a: lo,
            b: hi,
            value,
            err,
        });
        abs
    };
    for i in 0..start {
        let lo = a + i as f64 * h;
        let hi = if i + 1 == start { b } else { lo + h };
        l1 += push(&mut panels, lo, hi);
    }
    let tol = (1e-15 * l1).min(1e-13);
    for _ in 0..200_000 {
        let total_err: f64 = panels.iter().map(|p| p.err).sum();
        if total_err <= tol {
            break;
        }
        let worst = (0..panels.len())
            .max_by(|&i, &j| panels[i].err.total_cmp(&panels[j].err))
            .expect("nonempty");
        let p = panels.swap_remove(worst);
        let m = 0.5 * (p.a + p.b);
        push(&mut panels, p.a, m);
        push(&mut panels, m, p.b);
    }
    let mut sum = 0.0;
    let mut comp = 0.0;
    for p in &panels {
        let y = p.value - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

/// erf by its Maclaurin series (|x| <= 3) or the Laplace continued fraction
/// for erfc (|x| > 3).
pub fn erf_oracle(x: f64) -> f64 {
    let ax = x.abs();
    let value = if ax <= 3.0 {
        let mut term = ax;
        let mut sum = ax;
        let x2 = ax * ax;
        let mut n = 0.0;
        loop {
            n += 1.0;
            term *= -x2 / n;
            let add = term / (2.0 * n + 1.0);
            sum += add;
            if add.abs() <= 1e-18 * sum.abs() {
                break;
            }
        }
        2.0 / std::f64::consts::PI.sqrt() * sum
    } else {
        1.0 - erfc_cf(ax)
    };
    value.copysign(x)
}

/// erfc(x) for x > 0 by continued fraction (Lentz); converges within the
/// iteration cap for x >= 0.8.
pub fn erfc_cf(x: f64) -> f64 {
    // erfc x = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + 2/(x + ...)))))
    let tiny = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for n in 1..500 {
        let a = n as f64 / 2.0;
        d = x + a * d;
        d = if d.abs() < tiny { tiny } else { d };
        c = x + a / c;
        c = if c.abs() < tiny { tiny } else { c };
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x * x).exp() / std::f64::consts::PI.sqrt() / f
}

/// Standard normal CDF from the oracle erf; the lower tail goes through the
/// continued fraction to avoid cancellation in `1 + erf`.
pub fn phi_oracle(x: f64) -> f64 {
    if x < -std::f64::consts::SQRT_2 {
        0.5 * erfc_cf(-x / std::f64::consts::SQRT_2)
    } else {
        0.5 * (1.0 + erf_oracle(x / std::f64::consts::SQRT_2))
    }
}

/// Uniform draws for randomized parameter grids.
pub struct Uniforms(SplitMix64);

impl Uniforms {
    pub fn new(seed: u64) -> Self {
        Self(SplitMix64::new(seed))
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.0.next_open01()
    }

    pub fn int(&mut self, lo: usize, hi: usize) -> usize {
        lo + (self.0.next_u64() % (hi - lo + 1) as u64) as usize
    }
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}
