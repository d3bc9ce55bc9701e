//! Plug-in block estimates and the centered, rescaled residual matrix.

use super::packed::{PackedResidual, PackedRows};
use crate::error::{Error, Result};
use crate::netgen::{generate_sbm, AdjacencyGraph, BlockMatrix, Membership};
use crate::rng::SeededRng;
use crate::spectral::{
    extreme_eigenvalues_with, DenseSymmetric, EigenExtremes, ExtremeOptions, SymmetricOperator,
};

/// Default clamp for fitted probabilities before rescaling.
pub const DEFAULT_CLAMP_EPS: f64 = 1e-6;

/// Edge counts per community pair. Diagonal entries count each within-pair
/// edge once.
fn block_edge_counts(graph: &AdjacencyGraph, ghat: &Membership) -> Vec<u64> {
    let k = ghat.k();
    let g = ghat.labels();
    let mut counts = vec![0u64; k * k];
    for (i, j) in graph.edges() {
        let (a, b) = (g[i], g[j]);
        counts[a * k + b] += 1;
        if a != b {
            counts[b * k + a] += 1;
        }
    }
    counts
}

fn check_dims(graph: &AdjacencyGraph, ghat: &Membership) -> Result<()> {
    if ghat.n() != graph.n() {
        return Err(Error::param(format!(
            "membership covers {} nodes but the graph has {}",
            ghat.n(),
            graph.n()
        )));
    }
    if !ghat.is_proper() {
        return Err(Error::param("membership leaves a community empty"));
    }
    Ok(())
}

/// Block estimate together with the communities whose diagonal entry was
/// undefined (single-node communities) and replaced by 0.5.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockFit {
    pub blocks: BlockMatrix,
    pub degenerate: Vec<usize>,
}

/// Plug-in estimate that substitutes 0.5 for undefined diagonal entries.
pub fn fit_blocks(graph: &AdjacencyGraph, ghat: &Membership) -> Result<BlockFit> {
    check_dims(graph, ghat)?;
    let k = ghat.k();
    let sizes = ghat.sizes();
    let counts = block_edge_counts(graph, ghat);
    let mut probs = vec![0.0; k * k];
    let mut degenerate = Vec::new();
    for a in 0..k {
        for b in 0..k {
            let pairs = if a == b {
                sizes[a] * sizes[a].saturating_sub(1) / 2
            } else {
                sizes[a] * sizes[b]
            };
            probs[a * k + b] = if pairs == 0 {
                if a == b && !degenerate.contains(&a) {
                    degenerate.push(a);
                }
                0.5
            } else {
                counts[a * k + b] as f64 / pairs as f64
            };
        }
    }
    Ok(BlockFit {
        blocks: BlockMatrix::new(k, probs)?,
        degenerate,
    })
}

/// Plug-in estimate of the block matrix: the edge density between (or
/// within) each pair of estimated communities.
///
/// A single-node community has no within-community pairs; this is reported
/// as [`Error::DegenerateCluster`].
pub fn estimate_block_matrix(graph: &AdjacencyGraph, ghat: &Membership) -> Result<BlockMatrix> {
    let fit = fit_blocks(graph, ghat)?;
    match fit.degenerate.first() {
        Some(&cluster) => Err(Error::DegenerateCluster { cluster }),
        None => Ok(fit.blocks),
    }
}

/// Per-block rescaling constants derived from (clamped) probabilities.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct BlockScaling {
    pub(super) k: usize,
    /// Clamped probabilities.
    probs: Vec<f64>,
    /// `1 / sqrt((n - 1) p (1 - p))`.
    pub(super) inv_scale: Vec<f64>,
    /// `p / sqrt((n - 1) p (1 - p))`.
    pub(super) center: Vec<f64>,
}

impl BlockScaling {
    fn new(n: usize, k: usize, probs: Vec<f64>) -> Self {
        let nm1 = (n.max(2) - 1) as f64;
        let inv_scale: Vec<f64> = probs.iter().map(|&p| 1.0 / (nm1 * p * (1.0 - p)).sqrt()).collect();
        let center = probs.iter().zip(&inv_scale).map(|(p, s)| p * s).collect();
        Self {
            k,
            probs,
            inv_scale,
            center,
        }
    }

    fn value(&self, a: usize, b: usize, edge: bool) -> f64 {
        let idx = a * self.k + b;
        let x = if edge { 1.0 } else { 0.0 };
        (x - self.probs[idx]) * self.inv_scale[idx]
    }
}

fn clamp_blocks(blocks: &BlockMatrix, eps: f64) -> Result<(BlockMatrix, usize)> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::param(format!("clamp epsilon must lie in (0, 0.5), got {eps}")));
    }
    let k = blocks.k();
    let mut clamped = 0;
    let mut probs = blocks.as_slice().to_vec();
    for a in 0..k {
        for b in a..k {
            let p = blocks.get(a, b);
            let c = p.clamp(eps, 1.0 - eps);
            if c != p {
                clamped += 1;
            }
            probs[a * k + b] = c;
            probs[b * k + a] = c;
        }
    }
    Ok((BlockMatrix::new(k, probs)?, clamped))
}

/// `A` centered by fitted probabilities and rescaled entrywise by their
/// binomial standard deviation, with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualMatrix {
    pub n: usize,
    pub values: DenseSymmetric,
    pub membership: Membership,
    /// Probabilities actually used (after clamping).
    pub blocks: BlockMatrix,
    /// Number of block entries `(a, b)`, `a <= b`, that were clamped.
    pub clamp_count: usize,
}

impl ResidualMatrix {
    /// Estimated edge probability `P[i][j]` used for entry `(i, j)`.
    pub fn phat(&self, i: usize, j: usize) -> f64 {
        self.blocks.get(self.membership.label(i), self.membership.label(j))
    }

    pub fn phat_dense(&self) -> DenseSymmetric {
        let mut m = DenseSymmetric::zeros(self.n);
        for i in 0..self.n {
            for j in i..self.n {
                m.set_sym(i, j, self.phat(i, j));
            }
        }
        m
    }
}

fn build_residual(graph: &AdjacencyGraph, membership: &Membership, blocks: BlockMatrix, clamp_count: usize) -> ResidualMatrix {
    let n = graph.n();
    let scaling = BlockScaling::new(n, blocks.k(), blocks.as_slice().to_vec());
    let g = membership.labels();
    let mut values = DenseSymmetric::zeros(n);
    for i in 0..n {
        for j in i + 1..n {
            values.set_sym(i, j, scaling.value(g[i], g[j], false));
        }
        for &j in graph.neighbors(i) {
            let j = j as usize;
            if j > i {
                values.set_sym(i, j, scaling.value(g[i], g[j], true));
            }
        }
    }
    ResidualMatrix {
        n,
        values,
        membership: membership.clone(),
        blocks,
        clamp_count,
    }
}

/// Residual matrix from an estimated membership and block matrix, with
/// probabilities clamped into `[clamp_eps, 1 - clamp_eps]`.
pub fn residual_matrix(graph: &AdjacencyGraph, ghat: &Membership, bhat: &BlockMatrix, clamp_eps: f64) -> Result<ResidualMatrix> {
    check_dims(graph, ghat)?;
    if bhat.k() != ghat.k() {
        return Err(Error::param(format!(
            "membership has {} communities but block matrix is {}x{}",
            ghat.k(),
            bhat.k(),
            bhat.k()
        )));
    }
    let (blocks, clamp_count) = clamp_blocks(bhat, clamp_eps)?;
    Ok(build_residual(graph, ghat, blocks, clamp_count))
}

/// Residual matrix from the true model parameters. Every block probability
/// must lie strictly inside (0, 1).
pub fn oracle_residual_matrix(graph: &AdjacencyGraph, g: &Membership, blocks: &BlockMatrix) -> Result<ResidualMatrix> {
    check_dims(graph, g)?;
    if blocks.k() != g.k() {
        return Err(Error::param("membership and block matrix dimensions differ"));
    }
    if let Some(p) = blocks.as_slice().iter().find(|p| **p <= 0.0 || **p >= 1.0) {
        return Err(Error::param(format!(
            "block probability {p} has zero Bernoulli variance"
        )));
    }
    Ok(build_residual(graph, g, blocks.clone(), 0))
}

/// Node order grouping communities contiguously.
#[derive(Debug, Clone)]
pub(crate) struct SortedLayout {
    /// `order[s]` is the original node at sorted position `s`.
    pub order: Vec<usize>,
    /// Membership in sorted order.
    pub membership: Membership,
    /// `starts[c]..starts[c + 1]` are the positions of community `c`.
    pub starts: Vec<usize>,
}

impl SortedLayout {
    pub fn new(membership: &Membership) -> Self {
        let k = membership.k();
        let mut order: Vec<usize> = (0..membership.n()).collect();
        order.sort_by_key(|&i| membership.label(i));
        let sorted_membership = membership.restricted(&order);
        let mut starts = vec![0; k + 1];
        for &l in sorted_membership.labels() {
            starts[l + 1] += 1;
        }
        for c in 0..k {
            starts[c + 1] += starts[c];
        }
        Self {
            order,
            membership: sorted_membership,
            starts,
        }
    }

    /// Graph relabeled into sorted order.
    pub fn sort_graph(&self, graph: &AdjacencyGraph) -> AdjacencyGraph {
        let mut position = vec![0; self.order.len()];
        for (s, &v) in self.order.iter().enumerate() {
            position[v] = s;
        }
        graph.permuted(&position)
    }
}

/// Matrix-free residual operator on a graph whose nodes are in
/// [`SortedLayout`] order.
pub(crate) struct ResidualOperator<'a> {
    graph: &'a AdjacencyGraph,
    layout: &'a SortedLayout,
    scaling: &'a BlockScaling,
    /// Per node, `k + 1` cut points into its neighbour list by community.
    cuts: Vec<u32>,
}

impl<'a> ResidualOperator<'a> {
    pub fn new(graph: &'a AdjacencyGraph, layout: &'a SortedLayout, scaling: &'a BlockScaling) -> Self {
        let k = scaling.k;
        let mut cuts = Vec::with_capacity(graph.n() * (k + 1));
        for i in 0..graph.n() {
            let row = graph.neighbors(i);
            cuts.push(0);
            for c in 1..k {
                let bound = layout.starts[c] as u32;
                cuts.push(row.partition_point(|&j| j < bound) as u32);
            }
            cuts.push(row.len() as u32);
        }
        Self {
            graph,
            layout,
            scaling,
            cuts,
        }
    }
}

impl SymmetricOperator for ResidualOperator<'_> {
    fn dim(&self) -> usize {
        self.graph.n()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let k = self.scaling.k;
        let starts = &self.layout.starts;
        let block_sums: Vec<f64> = (0..k).map(|c| x[starts[c]..starts[c + 1]].iter().sum()).collect();
        // offset[a] = sum_c center[a][c] * X_c
        let offset: Vec<f64> = (0..k)
            .map(|a| (0..k).map(|c| self.scaling.center[a * k + c] * block_sums[c]).sum())
            .collect();
        let labels = self.layout.membership.labels();
        for (i, yi) in y.iter_mut().enumerate() {
            let a = labels[i];
            let row = self.graph.neighbors(i);
            let cut = &self.cuts[i * (k + 1)..(i + 1) * (k + 1)];
            let mut acc = 0.0;
            for c in 0..k {
                let seg = &row[cut[c] as usize..cut[c + 1] as usize];
                let s: f64 = seg.iter().map(|&j| x[j as usize]).sum();
                acc += self.scaling.inv_scale[a * k + c] * s;
            }
            *yi = acc - offset[a] + self.scaling.center[a * k + a] * x[i];
        }
    }
}

/// A fitted null model prepared for repeated residual eigenvalue
/// computations (observed graph and bootstrap replicates).
pub(crate) struct FittedModel {
    pub layout: SortedLayout,
    /// Unclamped estimate (with 0.5 for degenerate diagonals); replicates are
    /// drawn from this.
    pub fit: BlockFit,
    pub clamp_count: usize,
    scaling: BlockScaling,
}

impl FittedModel {
    pub fn new(graph: &AdjacencyGraph, ghat: &Membership, clamp_eps: f64) -> Result<Self> {
        let fit = fit_blocks(graph, ghat)?;
        let (clamped, clamp_count) = clamp_blocks(&fit.blocks, clamp_eps)?;
        let scaling = BlockScaling::new(graph.n(), clamped.k(), clamped.as_slice().to_vec());
        Ok(Self {
            layout: SortedLayout::new(ghat),
            fit,
            clamp_count,
            scaling,
        })
    }

    /// Extreme eigenvalues of the residual of a graph in sorted layout.
    pub fn extremes_sorted(&self, sorted: &SortedGraph, tol: f64) -> Result<EigenExtremes> {
        let opts = ExtremeOptions::for_dim(self.layout.order.len(), tol);
        match sorted {
            SortedGraph::Sparse(g) => {
                extreme_eigenvalues_with(&ResidualOperator::new(g, &self.layout, &self.scaling), opts)
            }
            SortedGraph::Packed(rows) => {
                extreme_eigenvalues_with(&PackedResidual::new(rows, &self.layout, &self.scaling), opts)
            }
        }
    }

    pub fn extremes(&self, graph: &AdjacencyGraph, tol: f64) -> Result<EigenExtremes> {
        let sorted = self.layout.sort_graph(graph);
        let sorted = if PackedRows::worthwhile(graph.n(), self.scaling.k, graph.edge_count() as f64) {
            SortedGraph::Packed(PackedRows::from_graph(&sorted, &self.layout))
        } else {
            SortedGraph::Sparse(sorted)
        };
        self.extremes_sorted(&sorted, tol)
    }

    /// Expected edge count of a replicate.
    fn expected_edges(&self) -> f64 {
        let sizes = self.layout.membership.sizes();
        let b = &self.fit.blocks;
        let mut total = 0.0;
        for a in 0..sizes.len() {
            let na = sizes[a] as f64;
            total += na * (na - 1.0) / 2.0 * b.get(a, a);
            for c in a + 1..sizes.len() {
                total += na * sizes[c] as f64 * b.get(a, c);
            }
        }
        total
    }

    /// Replicate graph from the fitted model, in sorted layout. Both
    /// representations consume the stream identically.
    pub fn sample_sorted(&self, rng: &mut SeededRng) -> Result<SortedGraph> {
        let n = self.layout.order.len();
        if PackedRows::worthwhile(n, self.scaling.k, self.expected_edges()) {
            Ok(SortedGraph::Packed(PackedRows::sample(&self.layout, &self.fit.blocks, rng)))
        } else {
            Ok(SortedGraph::Sparse(generate_sbm(&self.layout.membership, &self.fit.blocks, rng)?))
        }
    }
}

/// A graph in sorted layout, stored as neighbour lists or packed rows.
pub(crate) enum SortedGraph {
    Sparse(AdjacencyGraph),
    Packed(PackedRows),
}
