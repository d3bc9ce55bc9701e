//! Symmetric eigen-solvers and spectral clustering.

mod kmeans;
mod lanczos;
mod operator;
mod tridiag;

pub use kmeans::{kmeans, KMeansOptions, KMeansResult};
pub use lanczos::{
    extreme_eigenvalues_with, leading_eigenpairs, leading_singular_subspace,
    symmetric_extreme_eigenvalues, EigenExtremes, ExtremeOptions, Reorth, Subspace,
    SubspaceOptions, DEFAULT_TOL,
};
pub use operator::{DenseSymmetric, SymmetricOperator};

use crate::error::{Error, Result};
use crate::netgen::{AdjacencyGraph, Membership};
use crate::rng::SeededRng;

#[derive(Debug, Clone, Copy)]
pub struct ClusteringOptions {
    pub restarts: usize,
    pub max_iter: usize,
    /// Relative residual tolerance for the embedding vectors.
    pub eigen_tol: f64,
    /// Cap on Lanczos steps for the embedding; vectors are used as-is when
    /// the cap is reached.
    pub max_lanczos_steps: usize,
    /// Number of leading vectors in the embedding; `None` uses `k0`.
    pub embedding_dim: Option<usize>,
}

impl Default for ClusteringOptions {
    fn default() -> Self {
        Self {
            restarts: 20,
            max_iter: 100,
            eigen_tol: 1e-8,
            max_lanczos_steps: 400,
            embedding_dim: None,
        }
    }
}

/// Spectral clustering: k-means on the rows of the `k0` leading singular
/// vectors of the adjacency matrix. Returns a membership with exactly `k0`
/// non-empty communities.
pub fn spectral_clustering(graph: &AdjacencyGraph, k0: usize, rng: &mut SeededRng, opts: ClusteringOptions) -> Result<Membership> {
    let n = graph.n();
    if k0 == 0 || k0 > n {
        return Err(Error::param(format!("cannot form {k0} clusters from {n} nodes")));
    }
    if k0 == 1 {
        return Ok(Membership::single(n));
    }
    let dim = opts.embedding_dim.unwrap_or(k0).clamp(1, n);
    let sub = leading_eigenpairs(
        graph,
        dim,
        SubspaceOptions {
            tol: opts.eigen_tol,
            max_steps: Some(opts.max_lanczos_steps.max(dim)),
            require_convergence: false,
        },
    )?;
    let rows = sub.rows();
    let km = kmeans(
        &rows,
        k0,
        rng,
        KMeansOptions {
            restarts: opts.restarts,
            max_iter: opts.max_iter,
        },
    )?;
    Membership::proper(km.labels, k0)
}
