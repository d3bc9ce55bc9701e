mod common;

use common::{airy_asymptotic, gauss_legendre, Airy, Tw1Oracle, TW1_MEAN, TW1_VARIANCE};
use sbm_gof::gof::{tw1_cdf, tw1_moments, tw1_quantile, Tw1Distribution};

#[test]
fn airy_oracle_matches_known_values() {
    let airy = Airy::new(-12.0, 2e-4);
    // Ai(0) = 3^(-2/3) / Gamma(2/3)
    assert!((airy.ai(0.0) - 0.355_028_053_887_817_2).abs() < 1e-11);
    assert!((airy.ai(-1.0) - 0.535_560_883_292_352_1).abs() < 1e-11);
    assert!((airy.ai(2.0) - 0.034_924_130_423_274_4).abs() < 1e-11);
    assert!((airy.ai(-5.0) - 0.350_761_009_024_114_2).abs() < 1e-10);
    let (a, _) = airy_asymptotic(12.0);
    assert!((a / 1.393_184_688_875_363e-13 - 1.0).abs() < 1e-10);
}

#[test]
fn gauss_legendre_integrates_polynomials() {
    let (x, w) = gauss_legendre(20);
    let total: f64 = w.iter().sum();
    assert!((total - 2.0).abs() < 1e-13);
    let x38: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(38)).sum();
    assert!((x38 - 2.0 / 39.0).abs() < 1e-13);
}

#[test]
fn cdf_matches_fredholm_oracle_at_probes() {
    let oracle = Tw1Oracle::new();
    let probes: Vec<f64> = (0..25).map(|i| -7.5 + 0.5 * i as f64 + 0.013 * i as f64).collect();
    let mut worst: f64 = 0.0;
    for &s in &probes {
        let err = (tw1_cdf(s) - oracle.cdf(s)).abs();
        worst = worst.max(err);
        assert!(err < 1e-4, "cdf({s}): table {} oracle {}", tw1_cdf(s), oracle.cdf(s));
    }
    println!("max |table - oracle| over {} probes: {worst:.2e}", probes.len());
}

#[test]
fn quantile_inverts_cdf() {
    for p in [0.01, 0.5, 0.975] {
        let q = tw1_quantile(p).unwrap();
        assert!((tw1_cdf(q) - p).abs() < 1e-6, "p = {p}");
    }
    let dist = Tw1Distribution::bundled();
    for &x in dist.grid().iter().step_by(37) {
        let p = dist.cdf(x);
        if p > 1e-6 && p < 1.0 - 1e-6 {
            assert!((dist.quantile(p).unwrap() - x).abs() < 1e-6, "x = {x}");
        }
    }
}

#[test]
fn moments_match_published_values() {
    let (mean, sd) = tw1_moments();
    assert!((mean - TW1_MEAN).abs() < 1e-3, "mean {mean}");
    assert!((sd - TW1_VARIANCE.sqrt()).abs() < 1e-3, "sd {sd}");
}

#[test]
fn upper_quantile_matches_oracle() {
    let oracle = Tw1Oracle::new();
    let t = tw1_quantile(0.975).unwrap();
    assert!((oracle.cdf(t) - 0.975).abs() < 1e-4);
}
