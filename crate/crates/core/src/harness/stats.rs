//! Summary statistics for simulation output.

use serde::{Deserialize, Serialize};

/// Sample mean and standard deviation (denominator `n - 1`).
pub fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn sorted(xs: &[f64]) -> Vec<f64> {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Linear-interpolation sample quantile (type 7).
pub fn quantile(xs: &[f64], p: f64) -> f64 {
    let v = sorted(xs);
    if v.is_empty() {
        return f64::NAN;
    }
    let h = (v.len() - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    v[lo] + (h - lo as f64) * (v[hi] - v[lo])
}

/// Silverman's rule-of-thumb bandwidth `0.9 min(sd, IQR / 1.34) n^(-1/5)`.
pub fn silverman_bandwidth(xs: &[f64]) -> f64 {
    let (_, sd) = mean_sd(xs);
    let iqr = quantile(xs, 0.75) - quantile(xs, 0.25);
    let spread = if iqr > 0.0 { sd.min(iqr / 1.34) } else { sd };
    0.9 * spread * (xs.len() as f64).powf(-0.2)
}

/// Gaussian kernel density estimate on an even grid covering the sample
/// range padded by three bandwidths.
pub fn gaussian_kde(xs: &[f64], points: usize) -> Vec<(f64, f64)> {
    let h = silverman_bandwidth(xs);
    if xs.len() < 2 || !(h > 0.0) || points < 2 {
        return Vec::new();
    }
    let v = sorted(xs);
    let lo = v[0] - 3.0 * h;
    let hi = v[v.len() - 1] + 3.0 * h;
    let norm = 1.0 / (xs.len() as f64 * h * (2.0 * std::f64::consts::PI).sqrt());
    (0..points)
        .map(|i| {
            let x = lo + (hi - lo) * i as f64 / (points - 1) as f64;
            let d: f64 = v.iter().map(|&s| (-0.5 * ((x - s) / h).powi(2)).exp()).sum();
            (x, d * norm)
        })
        .collect()
}

/// Kolmogorov-Smirnov distance between the sample and a continuous cdf.
pub fn ks_distance(xs: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let v = sorted(xs);
    let n = v.len() as f64;
    v.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// Asymptotic p-value of the one-sample KS test with the small-sample
/// correction `(sqrt(n) + 0.12 + 0.11 / sqrt(n)) D`.
pub fn ks_pvalue(d: f64, n: usize) -> f64 {
    let sn = (n as f64).sqrt();
    let lambda = (sn + 0.12 + 0.11 / sn) * d;
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let k = f64::from(k);
        let term = (-2.0 * k * k * lambda * lambda).exp();
        sum += if k as u32 % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSummary {
    pub count: usize,
    pub mean: f64,
    pub sd: f64,
    /// KS distance to the TW1 law.
    pub ks_tw1: f64,
    pub ks_pvalue: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn normal_cdf(x: f64) -> f64 {
        // Abramowitz-Stegun 7.1.26 on erf.
        let z = x.abs() / std::f64::consts::SQRT_2;
        let t = 1.0 / (1.0 + 0.3275911 * z);
        let poly = t * (0.254829592 + t * (-0.284496736 + t * (1.421413741 + t * (-1.453152027 + t * 1.061405429))));
        let erf = 1.0 - poly * (-z * z).exp();
        0.5 * (1.0 + erf.copysign(x))
    }

    #[test]
    fn moments_and_quantiles() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let (m, s) = mean_sd(&xs);
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(quantile(&xs, 0.5), 2.5);
        assert_eq!(quantile(&xs, 0.0), 1.0);
        assert_eq!(quantile(&xs, 1.0), 4.0);
    }

    #[test]
    fn kde_integrates_to_one() {
        let xs: Vec<f64> = (0..200).map(|i| ((i * 37) % 101) as f64 / 10.0).collect();
        let grid = gaussian_kde(&xs, 2000);
        let dx = grid[1].0 - grid[0].0;
        let mass: f64 = grid.iter().map(|p| p.1).sum::<f64>() * dx;
        assert!((mass - 1.0).abs() < 1e-3, "{mass}");
    }

    #[test]
    fn ks_of_exact_quantiles_is_small() {
        // Midpoint quantiles of the uniform law give D = 1 / (2n).
        let n = 50;
        let xs: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
        let d = ks_distance(&xs, |x| x.clamp(0.0, 1.0));
        assert!((d - 0.5 / n as f64).abs() < 1e-12);
        assert!(ks_pvalue(d, n) > 0.99);
    }

    #[test]
    fn ks_pvalue_matches_critical_values() {
        // Kolmogorov limit: P(K > 1.358) = 0.05, P(K > 1.628) = 0.01.
        let n = 1_000_000;
        let scale = (n as f64).sqrt();
        assert!((ks_pvalue(1.358 / scale, n) - 0.05).abs() < 5e-4);
        assert!((ks_pvalue(1.628 / scale, n) - 0.01).abs() < 2e-4);
    }

    #[test]
    fn shifted_sample_rejected() {
        let xs: Vec<f64> = (1..200).map(|i| 0.5 + i as f64 / 200.0 * 4.0 - 2.0).collect();
        let d = ks_distance(&xs, normal_cdf);
        assert!(ks_pvalue(d, xs.len()) < 0.01);
    }
}
