//! Tracy-Widom (beta = 1) distribution from a bundled cdf table.
//!
//! The table `assets/tw1_cdf.txt` holds `x cdf` pairs on a uniform grid over
//! [-10, 9] with step 0.01. Values between grid points come from monotone
//! piecewise-cubic Hermite interpolation (Fritsch-Carlson slopes).

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

const BUNDLED_TABLE: &str = include_str!("../../assets/tw1_cdf.txt");

/// Version tag of the bundled table.
pub const TW1_TABLE_VERSION: &str = "tw1-cdf-v1";

/// SHA-256 of the bundled table text.
pub const TW1_TABLE_SHA256: &str = "4eeb0c4b8b8a1f73019442ffa46740cf59134992a47144b47fcf84717990ef3a";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Tw1Distribution {
    grid: Vec<f64>,
    cdf: Vec<f64>,
    slopes: Vec<f64>,
    mean: f64,
    sd: f64,
    checksum: String,
}

/// Fritsch-Carlson slopes with the harmonic-mean interior rule and
/// one-sided three-point end slopes.
fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        if delta[i - 1] * delta[i] > 0.0 {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    let end = |h0: f64, h1: f64, d0: f64, d1: f64| {
        let mut s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if s.signum() != d0.signum() {
            s = 0.0;
        } else if d0.signum() != d1.signum() && s.abs() > 3.0 * d0.abs() {
            s = 3.0 * d0;
        }
        s
    };
    if n > 2 {
        d[0] = end(h[0], h[1], delta[0], delta[1]);
        d[n - 1] = end(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    } else {
        d[0] = delta[0];
        d[1] = delta[0];
    }
    d
}

impl Tw1Distribution {
    /// The bundled table, parsed once.
    pub fn bundled() -> &'static Tw1Distribution {
        static TABLE: OnceLock<Tw1Distribution> = OnceLock::new();
        TABLE.get_or_init(|| Tw1Distribution::parse(BUNDLED_TABLE).expect("bundled TW1 table is valid"))
    }

    /// Parses a two-column `x cdf` table. `#` lines are comments. Abscissae
    /// must be strictly increasing and cdf values non-decreasing in [0, 1].
    pub fn parse(text: &str) -> Result<Self> {
        let mut grid = Vec::new();
        let mut cdf = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let t = raw.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let mut it = t.split_whitespace();
            let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
                return Err(Error::Parse {
                    line,
                    msg: "expected two columns".into(),
                });
            };
            let parse = |s: &str| {
                s.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| Error::Parse {
                    line,
                    msg: format!("invalid number {s:?}"),
                })
            };
            let (x, p) = (parse(a)?, parse(b)?);
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Parse {
                    line,
                    msg: format!("cdf value {p} outside [0, 1]"),
                });
            }
            if let (Some(&px), Some(&pp)) = (grid.last(), cdf.last()) {
                if x <= px || p < pp {
                    return Err(Error::Parse {
                        line,
                        msg: "table must be increasing".into(),
                    });
                }
            }
            grid.push(x);
            cdf.push(p);
        }
        if grid.len() < 4 {
            return Err(Error::Parse {
                line: 0,
                msg: "table needs at least four rows".into(),
            });
        }
        let slopes = pchip_slopes(&grid, &cdf);
        let checksum = hex(&Sha256::digest(text.as_bytes()));
        let mut dist = Self {
            grid,
            cdf,
            slopes,
            mean: 0.0,
            sd: 0.0,
            checksum,
        };
        let (mean, sd) = dist.integrate_moments();
        dist.mean = mean;
        dist.sd = sd;
        Ok(dist)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn cdf_values(&self) -> &[f64] {
        &self.cdf
    }

    pub fn checksum(&self) -> &str {
        &self.checksum
    }

    fn segment(&self, x: f64) -> usize {
        let i = self.grid.partition_point(|&g| g <= x);
        i.saturating_sub(1).min(self.grid.len() - 2)
    }

    fn hermite(&self, i: usize, x: f64) -> f64 {
        let (x0, x1) = (self.grid[i], self.grid[i + 1]);
        let h = x1 - x0;
        let t = (x - x0) / h;
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.cdf[i] + h10 * h * self.slopes[i] + h01 * self.cdf[i + 1] + h11 * h * self.slopes[i + 1]
    }

    /// Distribution function; 0 below and 1 above the tabulated range.
    pub fn cdf(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        if x < self.grid[0] {
            return 0.0;
        }
        if x > *self.grid.last().unwrap() {
            return 1.0;
        }
        self.hermite(self.segment(x), x).clamp(0.0, 1.0)
    }

    /// Upper tail `1 - F(x)`.
    pub fn sf(&self, x: f64) -> f64 {
        1.0 - self.cdf(x)
    }

    /// Inverse cdf for `p` in (0, 1), clamped to the tabulated range.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::param(format!("probability must lie in (0, 1), got {p}")));
        }
        let last = self.grid.len() - 1;
        if p <= self.cdf[0] {
            return Ok(self.grid[0]);
        }
        if p >= self.cdf[last] {
            return Ok(self.grid[last]);
        }
        let i = self.cdf.partition_point(|&c| c < p).saturating_sub(1).min(last - 1);
        let (mut lo, mut hi) = (self.grid[i], self.grid[i + 1]);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.hermite(i, mid) < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// `(mean, standard deviation)`.
    pub fn moments(&self) -> (f64, f64) {
        (self.mean, self.sd)
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn sd(&self) -> f64 {
        self.sd
    }

    /// Integrates `E X = [x F] - int F` and `E X^2 = [x^2 F] - int 2 x F` over
    /// the table with composite Simpson on the Hermite interpolant.
    fn integrate_moments(&self) -> (f64, f64) {
        let (mut i1, mut i2) = (0.0, 0.0);
        for i in 0..self.grid.len() - 1 {
            let (a, b) = (self.grid[i], self.grid[i + 1]);
            let m = 0.5 * (a + b);
            let (fa, fm, fb) = (self.cdf[i], self.hermite(i, m), self.cdf[i + 1]);
            let w = (b - a) / 6.0;
            i1 += w * (fa + 4.0 * fm + fb);
            i2 += w * (2.0 * a * fa + 8.0 * m * fm + 2.0 * b * fb);
        }
        let (lo, hi) = (self.grid[0], *self.grid.last().unwrap());
        let (flo, fhi) = (self.cdf[0], *self.cdf.last().unwrap());
        let mean = hi * fhi - lo * flo - i1;
        let second = hi * hi * fhi - lo * lo * flo - i2;
        (mean, (second - mean * mean).max(0.0).sqrt())
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// CDF of the bundled table.
pub fn tw1_cdf(x: f64) -> f64 {
    Tw1Distribution::bundled().cdf(x)
}

/// Quantile of the bundled table.
pub fn tw1_quantile(p: f64) -> Result<f64> {
    Tw1Distribution::bundled().quantile(p)
}

/// `(mean, sd)` of the bundled table.
pub fn tw1_moments() -> (f64, f64) {
    Tw1Distribution::bundled().moments()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_checksum_matches() {
        assert_eq!(Tw1Distribution::bundled().checksum(), TW1_TABLE_SHA256);
    }

    #[test]
    fn inverse_consistency() {
        for p in [0.01, 0.5, 0.975] {
            let x = tw1_quantile(p).unwrap();
            assert!((tw1_cdf(x) - p).abs() < 1e-6, "p={p}");
        }
    }

    #[test]
    fn quantile_domain() {
        for p in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(tw1_quantile(p).is_err());
        }
    }

    #[test]
    fn cdf_outside_range() {
        assert_eq!(tw1_cdf(-50.0), 0.0);
        assert_eq!(tw1_cdf(50.0), 1.0);
    }

    #[test]
    fn parse_rejects_bad_tables() {
        assert!(Tw1Distribution::parse("").is_err());
        assert!(Tw1Distribution::parse("0 0.1\n1 0.2\n").is_err());
        assert!(Tw1Distribution::parse("0 0.1\n1 0.05\n2 0.3\n3 0.4\n").is_err());
        assert!(Tw1Distribution::parse("0 0.1\n0 0.2\n2 0.3\n3 0.4\n").is_err());
        assert!(Tw1Distribution::parse("0 0.1\n1 1.2\n2 0.3\n3 0.4\n").is_err());
        assert!(Tw1Distribution::parse("0 0.1\n1 nan\n2 0.3\n3 0.4\n").is_err());
        assert!(Tw1Distribution::parse("0 0.1\n1 0.2\n2 0.3\n3 0.4\n").is_ok());
    }

    #[test]
    fn interpolant_is_monotone() {
        let d = Tw1Distribution::bundled();
        let mut prev = 0.0;
        let mut x = -10.0;
        while x < 9.0 {
            let c = d.cdf(x);
            assert!(c >= prev);
            prev = c;
            x += 0.0037;
        }
    }
}
