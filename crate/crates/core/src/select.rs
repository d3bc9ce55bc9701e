//! Sequential estimation of the number of communities.
//!
//! `K0 = 1, 2, ...` is tested in turn and the first hypothesized count whose
//! statistic falls below the threshold is returned.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gof::{evaluate, threshold_for, TestOptions};
use crate::netgen::AdjacencyGraph;
use crate::rng::{keys, SeededRng};

/// How the per-stage threshold is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum ThresholdMode {
    /// TW1 upper quantile `t(alpha / 2)`.
    Quantile { alpha: f64 },
    /// `c * n^exponent`, with `exponent` in `(0, 5/6)`.
    PowerLaw { c: f64, exponent: f64 },
}

impl Default for ThresholdMode {
    fn default() -> Self {
        ThresholdMode::Quantile { alpha: 1e-4 }
    }
}

impl ThresholdMode {
    pub fn threshold(&self, n: usize) -> Result<f64> {
        match *self {
            ThresholdMode::Quantile { alpha } => threshold_for(alpha),
            ThresholdMode::PowerLaw { c, exponent } => {
                if !(exponent > 0.0 && exponent < 5.0 / 6.0) {
                    return Err(Error::param(format!("power-law exponent must lie in (0, 5/6), got {exponent}")));
                }
                if !(c > 0.0 && c.is_finite()) {
                    return Err(Error::param(format!("power-law constant must be positive, got {c}")));
                }
                Ok(c * (n as f64).powf(exponent))
            }
        }
    }
}

/// `max(10, floor(n^(1/3)))`.
pub fn default_k_max(n: usize) -> usize {
    10.max((n as f64).cbrt().floor() as usize)
}

#[derive(Debug, Clone, Copy)]
pub struct SelectOptions {
    pub mode: ThresholdMode,
    /// Largest `K0` tried; `None` means [`default_k_max`].
    pub k_max: Option<usize>,
    /// `Some(M)` uses the bootstrap-corrected statistic with `M` replicates.
    pub bootstrap: Option<usize>,
    /// Eigen-solver, clamping and clustering settings; `alpha` and
    /// `bootstrap` are ignored in favour of the fields above.
    pub test: TestOptions,
}

impl Default for SelectOptions {
    fn default() -> Self {
        Self {
            mode: ThresholdMode::default(),
            k_max: None,
            bootstrap: Some(50),
            test: TestOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub k0: usize,
    pub statistic: f64,
    pub threshold: f64,
    pub rejected: bool,
    pub lambda_1: f64,
    pub lambda_n: f64,
    pub community_sizes: Vec<usize>,
    pub degenerate_clusters: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KEstimateResult {
    pub k_hat: usize,
    pub trace: Vec<StageRecord>,
    pub mode: ThresholdMode,
    pub k_max: usize,
    pub bootstrap: Option<usize>,
    pub capped: bool,
    /// Labels found at the accepted stage (or the last stage when capped).
    pub labels: Vec<usize>,
}

/// Sequential estimate of the number of communities. Stage `K0` draws from
/// the sub-stream keyed by `K0` of a fork of `rng`.
pub fn estimate_k(graph: &AdjacencyGraph, opts: &SelectOptions, rng: &mut SeededRng) -> Result<KEstimateResult> {
    estimate_k_from(graph, opts, &rng.fork())
}

/// As [`estimate_k`] without touching the master stream.
pub fn estimate_k_from(graph: &AdjacencyGraph, opts: &SelectOptions, master: &SeededRng) -> Result<KEstimateResult> {
    let n = graph.n();
    let k_max = match opts.k_max {
        Some(0) => return Err(Error::param("k_max must be at least 1")),
        Some(k) => k,
        None => default_k_max(n),
    }
    .min(n);
    if k_max == 0 {
        return Err(Error::param("graph has no nodes"));
    }
    let threshold = opts.mode.threshold(n)?;
    let mut test = opts.test;
    test.bootstrap = opts.bootstrap;

    let mut trace = Vec::new();
    let mut labels = Vec::new();
    for k0 in 1..=k_max {
        let stage = master.derive_path(&[keys::STAGE, k0 as u64]);
        let ev = evaluate(graph, k0, None, &stage, &test)?;
        let rejected = ev.statistic >= threshold;
        trace.push(StageRecord {
            k0,
            statistic: ev.statistic,
            threshold,
            rejected,
            lambda_1: ev.observed.lambda_1,
            lambda_n: ev.observed.lambda_n,
            community_sizes: ev.membership.sizes(),
            degenerate_clusters: ev.degenerate_clusters,
        });
        labels = ev.membership.labels().to_vec();
        if !rejected {
            return Ok(KEstimateResult {
                k_hat: k0,
                trace,
                mode: opts.mode,
                k_max,
                bootstrap: opts.bootstrap,
                capped: false,
                labels,
            });
        }
    }
    Ok(KEstimateResult {
        k_hat: k_max,
        trace,
        mode: opts.mode,
        k_max,
        bootstrap: opts.bootstrap,
        capped: true,
        labels,
    })
}
