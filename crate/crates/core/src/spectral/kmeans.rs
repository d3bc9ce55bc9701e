//! Lloyd's k-means with D^2-weighted seeding and multiple restarts.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::SeededRng;

#[derive(Debug, Clone, Copy)]
pub struct KMeansOptions {
    pub restarts: usize,
    pub max_iter: usize,
}

impl Default for KMeansOptions {
    fn default() -> Self {
        Self {
            restarts: 20,
            max_iter: 100,
        }
    }
}

#[derive(Debug, Clone)]
pub struct KMeansResult {
    pub labels: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    /// Within-cluster sum of squared distances.
    pub objective: f64,
    pub iterations: usize,
    /// Objective after each Lloyd iteration of the winning restart.
    pub history: Vec<f64>,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Nearest centroid, ties to the lowest index.
fn nearest(row: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, cen) in centroids.iter().enumerate() {
        let d = sq_dist(row, cen);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

fn seed_centroids(rows: &[Vec<f64>], k: usize, rng: &mut SeededRng) -> Vec<Vec<f64>> {
    let n = rows.len();
    let mut centroids = vec![rows[rng.index(n)].clone()];
    let mut d2: Vec<f64> = rows.iter().map(|r| sq_dist(r, &centroids[0])).collect();
    while centroids.len() < k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let mut target = rng.uniform() * total;
            let mut chosen = n - 1;
            for (i, &d) in d2.iter().enumerate() {
                if d > 0.0 && target < d {
                    chosen = i;
                    break;
                }
                target -= d;
            }
            // Rounding can walk past the end; take the last positive weight.
            if d2[chosen] == 0.0 {
                chosen = d2.iter().rposition(|&d| d > 0.0).unwrap_or(chosen);
            }
            chosen
        } else {
            rng.index(n)
        };
        centroids.push(rows[pick].clone());
        for (i, r) in rows.iter().enumerate() {
            d2[i] = d2[i].min(sq_dist(r, &centroids[centroids.len() - 1]));
        }
    }
    centroids
}

fn update_centroids(rows: &[Vec<f64>], labels: &[usize], k: usize) -> Vec<Vec<f64>> {
    let dim = rows[0].len();
    let mut sums = vec![vec![0.0; dim]; k];
    let mut counts = vec![0usize; k];
    for (r, &l) in rows.iter().zip(labels) {
        counts[l] += 1;
        for (s, x) in sums[l].iter_mut().zip(r) {
            *s += x;
        }
    }
    for (s, &c) in sums.iter_mut().zip(&counts) {
        if c > 0 {
            s.iter_mut().for_each(|v| *v /= c as f64);
        }
    }
    sums
}

/// Moves the point farthest from its centroid into each empty cluster.
fn repair_empty(rows: &[Vec<f64>], labels: &mut [usize], centroids: &mut [Vec<f64>]) {
    let k = centroids.len();
    loop {
        let mut counts = vec![0usize; k];
        for &l in labels.iter() {
            counts[l] += 1;
        }
        let Some(empty) = counts.iter().position(|&c| c == 0) else {
            return;
        };
        let mut far = None;
        let mut far_d = -1.0;
        for (i, r) in rows.iter().enumerate() {
            if counts[labels[i]] < 2 {
                continue;
            }
            let d = sq_dist(r, &centroids[labels[i]]);
            if d > far_d {
                far_d = d;
                far = Some(i);
            }
        }
        let Some(i) = far else { return };
        labels[i] = empty;
        centroids[empty] = rows[i].clone();
    }
}

fn objective(rows: &[Vec<f64>], labels: &[usize], centroids: &[Vec<f64>]) -> f64 {
    rows.iter().zip(labels).map(|(r, &l)| sq_dist(r, &centroids[l])).sum()
}

fn lloyd(rows: &[Vec<f64>], k: usize, rng: &mut SeededRng, max_iter: usize) -> KMeansResult {
    let mut centroids = seed_centroids(rows, k, rng);
    let mut labels: Vec<usize> = rows.iter().map(|r| nearest(r, &centroids).0).collect();
    repair_empty(rows, &mut labels, &mut centroids);
    centroids = update_centroids(rows, &labels, k);
    let mut history = vec![objective(rows, &labels, &centroids)];
    let mut iterations = 0;
    while iterations < max_iter {
        iterations += 1;
        let mut next: Vec<usize> = rows.iter().map(|r| nearest(r, &centroids).0).collect();
        repair_empty(rows, &mut next, &mut centroids);
        let changed = next != labels;
        labels = next;
        centroids = update_centroids(rows, &labels, k);
        history.push(objective(rows, &labels, &centroids));
        if !changed {
            break;
        }
    }
    KMeansResult {
        objective: *history.last().unwrap(),
        labels,
        centroids,
        iterations,
        history,
    }
}

/// Clusters `rows` into exactly `k` non-empty groups, keeping the restart with
/// the smallest objective (ties to the lowest restart index). Restart `r`
/// draws from stream `r` of a fork of `rng`.
pub fn kmeans(rows: &[Vec<f64>], k: usize, rng: &mut SeededRng, opts: KMeansOptions) -> Result<KMeansResult> {
    let n = rows.len();
    if k == 0 || k > n {
        return Err(Error::param(format!("cannot form {k} clusters from {n} points")));
    }
    let dim = rows[0].len();
    if rows.iter().any(|r| r.len() != dim) {
        return Err(Error::param("k-means rows have unequal lengths"));
    }
    if rows.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::Numeric("non-finite k-means input".into()));
    }
    let restarts = opts.restarts.max(1);
    let parent = rng.fork();
    let runs: Vec<KMeansResult> = (0..restarts)
        .into_par_iter()
        .map(|r| lloyd(rows, k, &mut parent.derive(r as u64), opts.max_iter))
        .collect();
    let best = runs
        .into_iter()
        .enumerate()
        .min_by(|(ia, a), (ib, b)| a.objective.total_cmp(&b.objective).then(ia.cmp(ib)))
        .map(|(_, r)| r)
        .expect("at least one restart");
    Ok(best)
}
