//! Small statistics toolkit for the experiment runners.

use serde::Serialize;

/// Moment summary of a sample: raw moments 1–4 with standard errors, plus
/// mean/variance with the variance's own standard error.
#[derive(Debug, Clone, Serialize)]
pub struct MomentSummary {
    pub n: usize,
    /// Raw moments `m_k = Σ xᵢᵏ / n`, k = 1..4.
    pub moments: [f64; 4],
    /// Standard errors of the raw moments: `√((m_{2k} − m_k²)/n)`.
    pub moment_ses: [f64; 4],
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    /// Asymptotic standard error of the variance estimate,
    /// `√((m₄ᶜ − var²)/n)` with the fourth central moment.
    pub variance_se: f64,
    pub min: f64,
    pub max: f64,
}

pub fn summarize(xs: &[f64]) -> MomentSummary {
    let n = xs.len();
    let nf = n as f64;
    let mut raw = [0.0f64; 8];
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for &x in xs {
        let mut p = 1.0;
        for r in raw.iter_mut() {
            p *= x;
            *r += p;
        }
        min = min.min(x);
        max = max.max(x);
    }
    for r in raw.iter_mut() {
        *r /= nf;
    }
    let mut moments = [0.0; 4];
    let mut moment_ses = [0.0; 4];
    for k in 1..=4usize {
        moments[k - 1] = raw[k - 1];
        let var_of_mk = (raw[2 * k - 1] - raw[k - 1] * raw[k - 1]).max(0.0);
        moment_ses[k - 1] = (var_of_mk / nf).sqrt();
    }
    let mean = raw[0];
    let m2c: f64 = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / nf;
    let m4c: f64 = xs.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / nf;
    let variance = if n > 1 { m2c * nf / (nf - 1.0) } else { 0.0 };
    let variance_se = ((m4c - m2c * m2c).max(0.0) / nf).sqrt();
    MomentSummary { n, moments, moment_ses, mean, variance, variance_se, min, max }
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: usize, n: usize, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let p = successes as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = (z / denom) * ((p * (1.0 - p) + z2 / (4.0 * nf)) / nf).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Standard normal CDF via the Abramowitz–Stegun 7.1.26 rational
/// approximation of `erf` (absolute error below `1.5e−7`, ample for the
/// reference fractions used here).
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * (1.0 + erf(x / std::f64::consts::SQRT_2))
}

pub fn erf(x: f64) -> f64 {
    let sign = if x < 0.0 { -1.0 } else { 1.0 };
    let x = x.abs();
    let t = 1.0 / (1.0 + 0.3275911 * x);
    let poly = t
        * (0.254829592 + t * (-0.284496736 + t * (1.421413741 + t * (-1.453152027 + t * 1.061405429))));
    sign * (1.0 - poly * (-x * x).exp())
}

/// Standard error of a binomial fraction estimate.
pub fn fraction_se(p: f64, n: usize) -> f64 {
    if n == 0 {
        return f64::INFINITY;
    }
    (p * (1.0 - p) / n as f64).sqrt().max(1.0 / n as f64)
}
