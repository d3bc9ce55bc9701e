//! Experiment runners: null distributions, rejection tables, community-count
//! tables, single runs and the real-data workflow.
//!
//! Replicate `r` of a run seeded with `s` draws everything from streams
//! derived from `(s, r)` (and the table cell), so outputs do not depend on
//! the number of worker threads.

mod output;
mod spec;
mod stats;

use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use output::{cell, to_json_pretty, write_run, RunOutput, Table};
pub use spec::{
    ErrorTableSpec, EstimateKSpec, ExperimentSpec, MembershipDesign, ModelKind, ModelSample, ModelSpec,
    NullDistSpec, Preset, PresetExperiment, PsiDist, RunMode, SelectDesign, SelectKSpec, SingleTestSpec,
    TableModel,
};
pub use stats::{
    gaussian_kde, ks_distance, ks_pvalue, mean_sd, quantile, silverman_bandwidth, SampleSummary,
};

use crate::error::{Error, Result};
use crate::gof::{
    bootstrap_corrected_test, edge_scale, evaluate, gof_test, resolve_membership, threshold_for, tw1_cdf,
    GofTestResult, TestOptions,
};
use crate::netgen::{
    largest_connected_component, read_edge_list, read_labels, AdjacencyGraph, BlockMatrix, EdgeListOptions,
    Membership,
};
use crate::rng::{keys, SeededRng};
use crate::select::{estimate_k_from, KEstimateResult, SelectOptions, ThresholdMode};
use crate::spectral::ClusteringOptions;

/// Runtime settings that do not affect results.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

/// Runs `f` on a dedicated pool when a thread count is given.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build()
                .map_err(|e| Error::param(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn boot(m: usize) -> Option<usize> {
    (m > 0).then_some(m)
}

/// Runs any experiment and renders its files.
pub fn run_experiment(spec: &ExperimentSpec, opts: &RunOptions) -> Result<RunOutput> {
    spec.validate()?;
    with_threads(opts.threads, || match spec {
        ExperimentSpec::NullDist(s) => run_null_distribution(s).and_then(|r| r.to_output()),
        ExperimentSpec::ErrorTable(s) => run_error_table(s).and_then(|r| r.to_output()),
        ExperimentSpec::SelectK(s) => run_select_k_table(s).and_then(|r| r.to_output()),
        ExperimentSpec::SingleTest(s) => {
            let res = run_single_test(s)?;
            Ok(RunOutput {
                files: vec![("report.json".into(), to_json_pretty(&res)?)],
                summary: serde_json::to_value(&res)?,
            })
        }
        ExperimentSpec::EstimateK(s) => {
            let res = run_estimate_k(s)?;
            Ok(RunOutput {
                files: vec![("report.json".into(), to_json_pretty(&res)?)],
                summary: serde_json::json!({ "k_hat": res.k_hat, "capped": res.capped }),
            })
        }
    })?
}

// ---------------------------------------------------------------------------
// Null distribution

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullDistRow {
    pub replicate: usize,
    pub seed: u64,
    pub lambda_1: f64,
    pub lambda_n: f64,
    /// `n^(2/3) (lambda_1 - 2)`.
    pub top: f64,
    /// `n^(2/3) (-lambda_n - 2)`.
    pub bottom: f64,
    pub boot_top: Option<f64>,
    pub boot_bottom: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullDistResult {
    pub rows: Vec<NullDistRow>,
    pub density_points: usize,
}

impl NullDistResult {
    /// Columns `top`, `bottom`, `boot_top`, `boot_bottom` (bootstrap columns
    /// only when present).
    pub fn columns(&self) -> Vec<(&'static str, Vec<f64>)> {
        let mut cols = vec![
            ("top", self.rows.iter().map(|r| r.top).collect()),
            ("bottom", self.rows.iter().map(|r| r.bottom).collect()),
        ];
        if self.rows.iter().all(|r| r.boot_top.is_some()) && !self.rows.is_empty() {
            cols.push(("boot_top", self.rows.iter().filter_map(|r| r.boot_top).collect()));
            cols.push(("boot_bottom", self.rows.iter().filter_map(|r| r.boot_bottom).collect()));
        }
        cols
    }

    pub fn summaries(&self) -> Vec<(&'static str, SampleSummary)> {
        self.columns()
            .into_iter()
            .map(|(name, xs)| {
                let (mean, sd) = mean_sd(&xs);
                let d = ks_distance(&xs, tw1_cdf);
                (
                    name,
                    SampleSummary {
                        count: xs.len(),
                        mean,
                        sd,
                        ks_tw1: d,
                        ks_pvalue: ks_pvalue(d, xs.len()),
                    },
                )
            })
            .collect()
    }

    pub fn to_output(&self) -> Result<RunOutput> {
        let mut t = Table::new(&[
            "replicate",
            "seed",
            "lambda_1",
            "lambda_n",
            "top",
            "bottom",
            "boot_top",
            "boot_bottom",
        ]);
        for r in &self.rows {
            t.push(vec![
                r.replicate.to_string(),
                r.seed.to_string(),
                r.lambda_1.to_string(),
                r.lambda_n.to_string(),
                r.top.to_string(),
                r.bottom.to_string(),
                cell(r.boot_top),
                cell(r.boot_bottom),
            ]);
        }
        let mut files = vec![("samples.csv".to_string(), t.to_csv())];
        for (name, xs) in self.columns() {
            let mut text = format!("# gaussian kde of {name}, silverman bandwidth\n# x density\n");
            for (x, d) in gaussian_kde(&xs, self.density_points) {
                text.push_str(&format!("{x} {d}\n"));
            }
            files.push((format!("density_{name}.dat"), text));
        }
        let summary: serde_json::Map<String, serde_json::Value> = self
            .summaries()
            .into_iter()
            .map(|(k, v)| Ok((k.to_string(), serde_json::to_value(v)?)))
            .collect::<Result<_>>()?;
        Ok(RunOutput {
            files,
            summary: serde_json::Value::Object(summary),
        })
    }
}

/// Samples the rescaled extreme eigenvalues of the residual matrix under the
/// null, with and without the bootstrap correction.
pub fn run_null_distribution(spec: &NullDistSpec) -> Result<NullDistResult> {
    ExperimentSpec::NullDist(spec.clone()).validate()?;
    let master = SeededRng::new(spec.seed);
    let k0 = spec.k0.unwrap_or(spec.model.k);
    let opts = TestOptions {
        bootstrap: boot(spec.bootstrap),
        ..TestOptions::default()
    };
    let rows = (0..spec.replicates)
        .into_par_iter()
        .map(|r| {
            let rep = master.derive_path(&[keys::REPLICATE, r as u64]);
            let sample = spec.model.sample(&rep)?;
            let ghat = if spec.true_labels {
                sample.membership.as_ref()
            } else {
                None
            };
            let ev = evaluate(&sample.graph, k0, ghat, &rep.derive(keys::TEST), &opts)?;
            let s = edge_scale(sample.graph.n());
            Ok(NullDistRow {
                replicate: r,
                seed: rep.seed(),
                lambda_1: ev.observed.lambda_1,
                lambda_n: ev.observed.lambda_n,
                top: s * (ev.observed.lambda_1 - 2.0),
                bottom: s * (-ev.observed.lambda_n - 2.0),
                boot_top: ev.bootstrap.as_ref().map(|b| b.corrected_top),
                boot_bottom: ev.bootstrap.as_ref().map(|b| b.corrected_bottom),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NullDistResult {
        rows,
        density_points: spec.density_points,
    })
}

// ---------------------------------------------------------------------------
// Rejection table

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReplicate {
    pub k0: usize,
    pub model: TableModel,
    pub replicate: usize,
    pub seed: u64,
    pub mode: RunMode,
    pub statistic: f64,
    pub reject: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorCell {
    pub mode: RunMode,
    pub k0: usize,
    pub model: TableModel,
    pub replicates: usize,
    pub rejections: usize,
    pub proportion: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorTableResult {
    pub threshold: f64,
    pub cells: Vec<ErrorCell>,
    pub replicates: Vec<ErrorReplicate>,
}

impl ErrorTableResult {
    pub fn cell(&self, mode: RunMode, k0: usize, model: TableModel) -> Option<&ErrorCell> {
        self.cells
            .iter()
            .find(|c| c.mode == mode && c.k0 == k0 && c.model == model)
    }

    pub fn to_output(&self) -> Result<RunOutput> {
        let mut t = Table::new(&["mode", "k0", "model", "replicates", "rejections", "proportion"]);
        for c in &self.cells {
            t.push(vec![
                c.mode.name().into(),
                c.k0.to_string(),
                c.model.name().into(),
                c.replicates.to_string(),
                c.rejections.to_string(),
                c.proportion.to_string(),
            ]);
        }
        let mut raw = Table::new(&["k0", "model", "replicate", "seed", "mode", "statistic", "reject"]);
        for r in &self.replicates {
            raw.push(vec![
                r.k0.to_string(),
                r.model.name().into(),
                r.replicate.to_string(),
                r.seed.to_string(),
                r.mode.name().into(),
                r.statistic.to_string(),
                u8::from(r.reject).to_string(),
            ]);
        }
        Ok(RunOutput {
            files: vec![("table.csv".into(), t.to_csv()), ("replicates.csv".into(), raw.to_csv())],
            summary: serde_json::json!({ "threshold": self.threshold, "cells": self.cells }),
        })
    }
}

fn table_model_spec(spec: &ErrorTableSpec, k0: usize, model: TableModel) -> Result<ModelSpec> {
    let k = if model == TableModel::Finer { k0 + 1 } else { k0 };
    let blocks = BlockMatrix::planted(k, spec.within, spec.between)?;
    let base = ModelSpec::sbm(spec.n, &blocks);
    Ok(match model {
        TableModel::Null | TableModel::Finer => base,
        TableModel::Dcbm => ModelSpec {
            model: ModelKind::Dcbm,
            psi_dist: Some(spec.psi_dist),
            ..base
        },
        TableModel::Mmbm => ModelSpec {
            model: ModelKind::Mmbm,
            alpha: Some(spec.dirichlet_alpha),
            ..base
        },
    })
}

/// Rejection proportions of the plain and bootstrap-corrected tests. Both
/// modes see the same graphs and the same estimated memberships.
pub fn run_error_table(spec: &ErrorTableSpec) -> Result<ErrorTableResult> {
    ExperimentSpec::ErrorTable(spec.clone()).validate()?;
    let master = SeededRng::new(spec.seed);
    let threshold = threshold_for(spec.alpha)?;
    let jobs: Vec<(usize, TableModel, usize)> = spec
        .k0s
        .iter()
        .flat_map(|&k0| {
            spec.models
                .iter()
                .flat_map(move |&m| (0..spec.replicates).map(move |r| (k0, m, r)))
        })
        .collect();
    let results = jobs
        .par_iter()
        .map(|&(k0, model, r)| {
            let rep = master.derive_path(&[keys::REPLICATE, k0 as u64, model.code(), r as u64]);
            let sample = table_model_spec(spec, k0, model)?.sample(&rep)?;
            let stream = rep.derive(keys::TEST);
            let base = TestOptions {
                alpha: spec.alpha,
                ..TestOptions::default()
            };
            let ghat = resolve_membership(&sample.graph, k0, None, &stream, base.clustering)?;
            spec.modes
                .iter()
                .map(|&mode| {
                    let opts = TestOptions {
                        bootstrap: (mode == RunMode::Bootstrap).then_some(spec.bootstrap),
                        ..base
                    };
                    let ev = evaluate(&sample.graph, k0, Some(&ghat), &stream, &opts)?;
                    Ok(ErrorReplicate {
                        k0,
                        model,
                        replicate: r,
                        seed: rep.seed(),
                        mode,
                        statistic: ev.statistic,
                        reject: ev.statistic >= threshold,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let replicates: Vec<ErrorReplicate> = results.into_iter().flatten().collect();

    let mut cells = Vec::new();
    for &mode in &spec.modes {
        for &k0 in &spec.k0s {
            for &model in &spec.models {
                let rejections = replicates
                    .iter()
                    .filter(|x| x.mode == mode && x.k0 == k0 && x.model == model && x.reject)
                    .count();
                cells.push(ErrorCell {
                    mode,
                    k0,
                    model,
                    replicates: spec.replicates,
                    rejections,
                    proportion: rejections as f64 / spec.replicates as f64,
                });
            }
        }
    }
    Ok(ErrorTableResult {
        threshold,
        cells,
        replicates,
    })
}

// ---------------------------------------------------------------------------
// Community-count table

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectReplicate {
    pub n: usize,
    pub r: Option<f64>,
    pub k: usize,
    pub mode: RunMode,
    pub replicate: usize,
    pub seed: u64,
    pub k_hat: usize,
    pub capped: bool,
    /// Block-matrix draws needed (random-B design).
    pub b_attempts: Option<usize>,
    /// Statistic at each stage.
    pub statistics: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectCell {
    pub n: usize,
    pub r: Option<f64>,
    pub k: usize,
    pub mode: RunMode,
    pub replicates: usize,
    pub correct: usize,
    pub proportion: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectKResult {
    pub cells: Vec<SelectCell>,
    pub replicates: Vec<SelectReplicate>,
}

impl SelectKResult {
    pub fn cell(&self, mode: RunMode, n: usize, r: Option<f64>, k: usize) -> Option<&SelectCell> {
        self.cells
            .iter()
            .find(|c| c.mode == mode && c.n == n && c.r == r && c.k == k)
    }

    pub fn to_output(&self) -> Result<RunOutput> {
        let mut t = Table::new(&["mode", "n", "r", "K", "replicates", "correct", "proportion"]);
        for c in &self.cells {
            t.push(vec![
                c.mode.name().into(),
                c.n.to_string(),
                cell(c.r),
                c.k.to_string(),
                c.replicates.to_string(),
                c.correct.to_string(),
                c.proportion.to_string(),
            ]);
        }
        let mut raw = Table::new(&[
            "mode",
            "n",
            "r",
            "K",
            "replicate",
            "seed",
            "k_hat",
            "capped",
            "b_attempts",
            "statistics",
        ]);
        for x in &self.replicates {
            let stats: Vec<String> = x.statistics.iter().map(f64::to_string).collect();
            raw.push(vec![
                x.mode.name().into(),
                x.n.to_string(),
                cell(x.r),
                x.k.to_string(),
                x.replicate.to_string(),
                x.seed.to_string(),
                x.k_hat.to_string(),
                u8::from(x.capped).to_string(),
                cell(x.b_attempts),
                stats.join(";"),
            ]);
        }
        Ok(RunOutput {
            files: vec![("table.csv".into(), t.to_csv()), ("replicates.csv".into(), raw.to_csv())],
            summary: serde_json::json!({ "cells": self.cells }),
        })
    }
}

/// Block matrix with upper entries iid Unif(`low`, `high`), redrawn until its
/// smallest singular value reaches `min_singular`. Returns the matrix and the
/// number of draws.
pub fn random_block_matrix(k: usize, low: f64, high: f64, min_singular: f64, max_attempts: usize, rng: &mut SeededRng) -> Result<(BlockMatrix, usize)> {
    for attempt in 1..=max_attempts {
        let mut probs = vec![0.0; k * k];
        for a in 0..k {
            for b in a..k {
                let v = low + (high - low) * rng.uniform();
                probs[a * k + b] = v;
                probs[b * k + a] = v;
            }
        }
        let blocks = BlockMatrix::new(k, probs)?;
        let smallest = blocks.singular_values().last().copied().unwrap_or(0.0);
        if smallest >= min_singular {
            return Ok((blocks, attempt));
        }
    }
    Err(Error::Numeric(format!(
        "no {k}x{k} block matrix with smallest singular value >= {min_singular} in {max_attempts} draws"
    )))
}

struct SelectJob {
    n: usize,
    r: Option<f64>,
    k: usize,
    replicate: usize,
    stream: SeededRng,
}

/// Proportion of correct sequential estimates of the community count.
pub fn run_select_k_table(spec: &SelectKSpec) -> Result<SelectKResult> {
    ExperimentSpec::SelectK(spec.clone()).validate()?;
    let master = SeededRng::new(spec.seed);
    let mut cells_order: Vec<(usize, Option<f64>, usize)> = Vec::new();
    let mut jobs = Vec::new();
    match &spec.design {
        SelectDesign::RSweep { n, rs, ks } => {
            for &k in ks {
                for &r in rs {
                    cells_order.push((*n, Some(r), k));
                    for rep in 0..spec.replicates {
                        jobs.push(SelectJob {
                            n: *n,
                            r: Some(r),
                            k,
                            replicate: rep,
                            stream: master.derive_path(&[
                                keys::REPLICATE,
                                *n as u64,
                                r.to_bits(),
                                k as u64,
                                rep as u64,
                            ]),
                        });
                    }
                }
            }
        }
        SelectDesign::RandomB { ns, ks, .. } => {
            for &n in ns {
                for &k in ks {
                    cells_order.push((n, None, k));
                    for rep in 0..spec.replicates {
                        jobs.push(SelectJob {
                            n,
                            r: None,
                            k,
                            replicate: rep,
                            stream: master.derive_path(&[keys::REPLICATE, n as u64, k as u64, rep as u64]),
                        });
                    }
                }
            }
        }
    }

    let results = jobs
        .par_iter()
        .map(|job| {
            let (model, attempts) = match &spec.design {
                SelectDesign::RSweep { .. } => (
                    ModelSpec {
                        model: ModelKind::Sbm,
                        n: job.n,
                        k: job.k,
                        b: None,
                        r: job.r,
                        membership: MembershipDesign::Balanced,
                        psi_dist: None,
                        alpha: None,
                        seed: None,
                    },
                    None,
                ),
                SelectDesign::RandomB {
                    low,
                    high,
                    min_singular,
                    max_attempts,
                    fixed_b,
                    ..
                } => {
                    let (blocks, attempts) = match fixed_b {
                        Some(rows) => (BlockMatrix::from_rows(rows)?, 0),
                        None => random_block_matrix(
                            job.k,
                            *low,
                            *high,
                            *min_singular,
                            *max_attempts,
                            &mut job.stream.derive(keys::PARAMS),
                        )?,
                    };
                    (ModelSpec::sbm(job.n, &blocks), Some(attempts))
                }
            };
            let sample = model.sample(&job.stream)?;
            let stream = job.stream.derive(keys::TEST);
            spec.modes
                .iter()
                .map(|&mode| {
                    let opts = SelectOptions {
                        mode: spec.threshold,
                        k_max: spec.k_max,
                        bootstrap: (mode == RunMode::Bootstrap).then_some(spec.bootstrap),
                        test: TestOptions::default(),
                    };
                    let est = estimate_k_from(&sample.graph, &opts, &stream)?;
                    Ok(SelectReplicate {
                        n: job.n,
                        r: job.r,
                        k: job.k,
                        mode,
                        replicate: job.replicate,
                        seed: job.stream.seed(),
                        k_hat: est.k_hat,
                        capped: est.capped,
                        b_attempts: attempts,
                        statistics: est.trace.iter().map(|s| s.statistic).collect(),
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let replicates: Vec<SelectReplicate> = results.into_iter().flatten().collect();

    let mut cells = Vec::new();
    for &mode in &spec.modes {
        for &(n, r, k) in &cells_order {
            let correct = replicates
                .iter()
                .filter(|x| x.mode == mode && x.n == n && x.r == r && x.k == k && x.k_hat == k)
                .count();
            cells.push(SelectCell {
                n,
                r,
                k,
                mode,
                replicates: spec.replicates,
                correct,
                proportion: correct as f64 / spec.replicates as f64,
            });
        }
    }
    Ok(SelectKResult { cells, replicates })
}

// ---------------------------------------------------------------------------
// Single runs

/// One test on one graph drawn from `spec.model`.
pub fn run_single_test(spec: &SingleTestSpec) -> Result<GofTestResult> {
    ExperimentSpec::SingleTest(spec.clone()).validate()?;
    let master = SeededRng::new(spec.seed);
    let sample = spec.model.sample(&master.derive(keys::REPLICATE))?;
    let ghat = if spec.true_labels {
        sample.membership.as_ref()
    } else {
        None
    };
    let mut rng = master.derive(keys::TEST);
    match boot(spec.bootstrap) {
        None => gof_test(&sample.graph, spec.k0, spec.alpha, ghat, &mut rng),
        Some(m) => bootstrap_corrected_test(&sample.graph, spec.k0, spec.alpha, m, ghat, &mut rng),
    }
}

/// One sequential estimate on one graph drawn from `spec.model`.
pub fn run_estimate_k(spec: &EstimateKSpec) -> Result<KEstimateResult> {
    ExperimentSpec::EstimateK(spec.clone()).validate()?;
    let master = SeededRng::new(spec.seed);
    let sample = spec.model.sample(&master.derive(keys::REPLICATE))?;
    let opts = SelectOptions {
        mode: spec.threshold,
        k_max: spec.k_max,
        bootstrap: boot(spec.bootstrap),
        test: TestOptions::default(),
    };
    estimate_k_from(&sample.graph, &opts, &master.derive(keys::TEST))
}

// ---------------------------------------------------------------------------
// Observed graphs

/// Test of an observed graph against `k0` communities, with labels when
/// given and spectral clustering otherwise. The rng is forked once by the
/// test.
pub fn test_graph(graph: &AdjacencyGraph, k0: usize, labels: Option<&Membership>, alpha: f64, bootstrap: Option<usize>, rng: &mut SeededRng) -> Result<GofTestResult> {
    match bootstrap {
        None => gof_test(graph, k0, alpha, labels, rng),
        Some(m) => bootstrap_corrected_test(graph, k0, alpha, m, labels, rng),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequentialSettings {
    pub threshold: ThresholdMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bootstrap: Option<usize>,
    /// Leading eigenvectors used by spectral clustering at every stage;
    /// `None` uses `K0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding_dim: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealDataOptions {
    pub edges: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<PathBuf>,
    pub one_based: bool,
    pub k0: usize,
    pub alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bootstrap: Option<usize>,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequential: Option<SequentialSettings>,
}

/// Cross-tabulation of estimated groups against supplied labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub k_hat: usize,
    pub capped: bool,
    pub group_sizes: Vec<usize>,
    /// `counts[g][c]`: nodes of estimated group `g` carrying label `c`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label_counts: Option<Vec<Vec<usize>>>,
    pub estimate: KEstimateResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealDataReport {
    pub nodes: usize,
    pub edges: usize,
    pub component_nodes: usize,
    pub component_edges: usize,
    pub labels_used: bool,
    pub test: GofTestResult,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequential: Option<PartitionReport>,
}

/// Largest connected component, membership for it (when a label file is
/// given), the test, and optionally a sequential partition.
pub fn run_real_data(opts: &RealDataOptions) -> Result<RealDataReport> {
    let list = read_edge_list(
        &opts.edges,
        EdgeListOptions {
            indexing: if opts.one_based {
                crate::netgen::Indexing::One
            } else {
                crate::netgen::Indexing::Zero
            },
            ..EdgeListOptions::default()
        },
    )?;
    let (component, nodes) = largest_connected_component(&list.graph);
    let labels = match &opts.labels {
        Some(path) => Some(read_labels(path)?.membership_for(&list, &nodes)?),
        None => None,
    };
    if let Some(m) = &labels {
        if m.k() != opts.k0 {
            return Err(Error::param(format!(
                "labels define {} communities but K0 = {}",
                m.k(),
                opts.k0
            )));
        }
    }
    let mut rng = SeededRng::new(opts.seed);
    let test = test_graph(&component, opts.k0, labels.as_ref(), opts.alpha, opts.bootstrap, &mut rng)?;
    let sequential = match &opts.sequential {
        None => None,
        Some(s) => {
            let select = SelectOptions {
                mode: s.threshold,
                k_max: s.k_max,
                bootstrap: s.bootstrap,
                test: TestOptions {
                    clustering: ClusteringOptions {
                        embedding_dim: s.embedding_dim,
                        ..ClusteringOptions::default()
                    },
                    ..TestOptions::default()
                },
            };
            let est = estimate_k_from(&component, &select, &rng.fork())?;
            let group_sizes = Membership::new(est.labels.clone(), est.k_hat)?.sizes();
            let label_counts = labels.as_ref().map(|m| {
                let mut counts = vec![vec![0; m.k()]; est.k_hat];
                for (g, c) in est.labels.iter().zip(m.labels()) {
                    counts[*g][*c] += 1;
                }
                counts
            });
            Some(PartitionReport {
                k_hat: est.k_hat,
                capped: est.capped,
                group_sizes,
                label_counts,
                estimate: est,
            })
        }
    };
    Ok(RealDataReport {
        nodes: list.graph.n(),
        edges: list.graph.edge_count(),
        component_nodes: component.n(),
        component_edges: component.edge_count(),
        labels_used: labels.is_some(),
        test,
        sequential,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_null() -> NullDistSpec {
        NullDistSpec {
            model: ModelSpec {
                membership: MembershipDesign::Balanced,
                ..ModelSpec::sbm(60, &BlockMatrix::planted(2, 0.7, 0.3).unwrap())
            },
            k0: None,
            replicates: 3,
            seed: 11,
            bootstrap: 4,
            true_labels: false,
            density_points: 16,
        }
    }

    #[test]
    fn single_replicate_has_one_row() {
        let spec = NullDistSpec {
            replicates: 1,
            ..small_null()
        };
        let out = run_null_distribution(&spec).unwrap().to_output().unwrap();
        let csv = &out.files[0].1;
        assert_eq!(csv.lines().count(), 2);
        assert!(csv.starts_with("replicate,seed,lambda_1,lambda_n,top,bottom,boot_top,boot_bottom\n"));
    }

    #[test]
    fn outputs_do_not_depend_on_thread_count() {
        let spec = ExperimentSpec::NullDist(small_null());
        let one = run_experiment(&spec, &RunOptions { threads: Some(1) }).unwrap();
        let three = run_experiment(&spec, &RunOptions { threads: Some(3) }).unwrap();
        assert_eq!(one, three);
    }

    #[test]
    fn error_table_shape() {
        let spec = ErrorTableSpec {
            n: 60,
            k0s: vec![2, 3],
            models: TableModel::ALL.to_vec(),
            modes: vec![RunMode::Plain],
            within: 0.6,
            between: 0.2,
            alpha: 0.05,
            replicates: 2,
            seed: 3,
            bootstrap: 0,
            psi_dist: PsiDist::default(),
            dirichlet_alpha: 0.5,
        };
        let res = run_error_table(&spec).unwrap();
        assert_eq!(res.cells.len(), 8);
        assert_eq!(res.replicates.len(), 16);
        let out = res.to_output().unwrap();
        assert_eq!(out.files[0].1.lines().count(), 9);
    }

    #[test]
    fn near_one_level_rejects_everything() {
        let spec = ErrorTableSpec {
            n: 60,
            k0s: vec![2],
            models: vec![TableModel::Finer, TableModel::Dcbm],
            modes: vec![RunMode::Plain],
            within: 0.6,
            between: 0.2,
            alpha: 1.0 - 1e-12,
            replicates: 3,
            seed: 5,
            bootstrap: 0,
            psi_dist: PsiDist::default(),
            dirichlet_alpha: 0.5,
        };
        let res = run_error_table(&spec).unwrap();
        assert!(res.cells.iter().all(|c| c.proportion == 1.0));
    }

    #[test]
    fn random_block_matrix_meets_floor() {
        let mut rng = SeededRng::new(2);
        for k in 2..=4 {
            let (b, attempts) = random_block_matrix(k, 0.0, 0.5, 0.1, 1000, &mut rng).unwrap();
            assert!(attempts >= 1);
            assert!(b.singular_values()[k - 1] >= 0.1);
            assert!(b.as_slice().iter().all(|&v| (0.0..0.5).contains(&v)));
        }
        assert!(random_block_matrix(3, 0.0, 0.01, 0.5, 5, &mut rng).is_err());
    }

    #[test]
    fn fixed_b_traces_are_reproducible() {
        let spec = SelectKSpec {
            design: SelectDesign::RandomB {
                ns: vec![80],
                ks: vec![2],
                low: 0.0,
                high: 0.5,
                min_singular: 0.1,
                max_attempts: 1000,
                fixed_b: Some(vec![vec![0.5, 0.1], vec![0.1, 0.4]]),
            },
            modes: vec![RunMode::Plain],
            threshold: ThresholdMode::default(),
            k_max: Some(4),
            replicates: 2,
            seed: 9,
            bootstrap: 0,
        };
        let a = run_select_k_table(&spec).unwrap();
        let b = run_select_k_table(&spec).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.replicates[0].b_attempts, Some(0));
    }
}
