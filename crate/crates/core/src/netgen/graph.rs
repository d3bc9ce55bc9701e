use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Simple undirected graph on nodes `0..n`: a symmetric 0/1 adjacency matrix
/// with zero diagonal, stored as sorted neighbour lists (CSR).
///
/// All constructors enforce symmetry, the zero diagonal and the absence of
/// duplicate entries, so every value of this type satisfies the adjacency
/// invariants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjacencyGraph {
    n: usize,
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
}

impl AdjacencyGraph {
    /// Graph with `n` nodes and no edges.
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            offsets: vec![0; n + 1],
            neighbors: Vec::new(),
        }
    }

    /// Complete graph on `n` nodes.
    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        Self::from_sorted_upper(n, &edges)
    }

    /// Builds a graph from an arbitrary edge collection. Duplicates (in either
    /// orientation) are collapsed; self-loops and out-of-range endpoints are
    /// rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut upper = Vec::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::param(format!(
                    "edge ({a}, {b}) out of range for {n} nodes"
                )));
            }
            if a == b {
                return Err(Error::param(format!("self-loop at node {a}")));
            }
            upper.push((a.min(b), a.max(b)));
        }
        upper.sort_unstable();
        upper.dedup();
        Ok(Self::from_sorted_upper(n, &upper))
    }

    /// `upper` must hold pairs `i < j`, sorted and free of duplicates.
    pub(crate) fn from_sorted_upper(n: usize, upper: &[(usize, usize)]) -> Self {
        assert!(n <= u32::MAX as usize, "node count exceeds u32 range");
        let mut degree = vec![0usize; n];
        for &(i, j) in upper {
            degree[i] += 1;
            degree[j] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut neighbors = vec![0u32; offsets[n]];
        // Row-major order over i < j leaves every neighbour list sorted.
        for &(i, j) in upper {
            neighbors[fill[i]] = j as u32;
            fill[i] += 1;
            neighbors[fill[j]] = i as u32;
            fill[j] += 1;
        }
        Self {
            n,
            offsets,
            neighbors,
        }
    }

    /// Builds a graph from a dense 0/1 matrix, checking every invariant.
    pub fn from_dense(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len();
        let mut upper = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::param(format!(
                    "row {i} has length {}, expected {n}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if v > 1 {
                    return Err(Error::param(format!("entry ({i}, {j}) = {v} is not binary")));
                }
                if v != rows[j][i] {
                    return Err(Error::param(format!("entry ({i}, {j}) breaks symmetry")));
                }
                if i == j && v != 0 {
                    return Err(Error::param(format!("diagonal entry {i} is nonzero")));
                }
                if i < j && v == 1 {
                    upper.push((i, j));
                }
            }
        }
        Ok(Self::from_sorted_upper(n, &upper))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.neighbors[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.neighbors(i).binary_search(&(j as u32)).is_ok()
    }

    /// Entry `A[i][j]` as 0 or 1.
    pub fn entry(&self, i: usize, j: usize) -> u8 {
        u8::from(self.has_edge(i, j))
    }

    /// Edges `(i, j)` with `i < j` in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| {
            self.neighbors(i)
                .iter()
                .map(|&j| j as usize)
                .filter(move |&j| j > i)
                .map(move |j| (i, j))
        })
    }

    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        let mut rows = vec![vec![0u8; self.n]; self.n];
        for (i, row) in rows.iter_mut().enumerate() {
            for &j in self.neighbors(i) {
                row[j as usize] = 1;
            }
        }
        rows
    }

    /// Fraction of the `n(n-1)/2` node pairs joined by an edge.
    pub fn density(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        self.edge_count() as f64 / (self.n * (self.n - 1) / 2) as f64
    }

    /// Subgraph induced on `nodes` (new node `k` is old node `nodes[k]`).
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Self {
        let mut position = vec![usize::MAX; self.n];
        for (k, &v) in nodes.iter().enumerate() {
            position[v] = k;
        }
        let mut upper = Vec::new();
        for (a, &v) in nodes.iter().enumerate() {
            for &w in self.neighbors(v) {
                let b = position[w as usize];
                if b != usize::MAX && a < b {
                    upper.push((a, b));
                }
            }
        }
        upper.sort_unstable();
        Self::from_sorted_upper(nodes.len(), &upper)
    }

    /// Relabels nodes: old node `i` becomes new node `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n);
        let mut upper: Vec<(usize, usize)> = self
            .edges()
            .map(|(i, j)| {
                let (a, b) = (perm[i], perm[j]);
                (a.min(b), a.max(b))
            })
            .collect();
        upper.sort_unstable();
        Self::from_sorted_upper(self.n, &upper)
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.neighbors(i).iter().map(|&j| x[j as usize]).sum();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_edges_collapses_duplicates() {
        let g = AdjacencyGraph::from_edges(3, [(0, 1), (1, 0), (1, 2)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.neighbors(1), &[0, 2]);
        assert_eq!(g.entry(2, 1), 1);
        assert_eq!(g.entry(0, 2), 0);
    }

    #[test]
    fn from_edges_rejects_loops_and_range() {
        assert!(AdjacencyGraph::from_edges(3, [(1, 1)]).is_err());
        assert!(AdjacencyGraph::from_edges(3, [(0, 3)]).is_err());
    }

    #[test]
    fn dense_roundtrip_and_validation() {
        let rows = vec![vec![0, 1, 1], vec![1, 0, 0], vec![1, 0, 0]];
        let g = AdjacencyGraph::from_dense(&rows).unwrap();
        assert_eq!(g.to_dense(), rows);
        assert!(AdjacencyGraph::from_dense(&[vec![0, 1], vec![0, 0]]).is_err());
        assert!(AdjacencyGraph::from_dense(&[vec![1, 0], vec![0, 0]]).is_err());
        assert!(AdjacencyGraph::from_dense(&[vec![0, 2], vec![2, 0]]).is_err());
    }

    #[test]
    fn complete_graph_density_is_one() {
        let g = AdjacencyGraph::complete(5);
        assert_eq!(g.edge_count(), 10);
        assert_eq!(g.density(), 1.0);
        assert!((0..5).all(|i| g.entry(i, i) == 0));
    }

    #[test]
    fn induced_and_permuted() {
        let g = AdjacencyGraph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let sub = g.induced_subgraph(&[1, 2, 3]);
        assert_eq!(sub.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        let p = g.permuted(&[3, 2, 1, 0]);
        assert_eq!(p.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2), (2, 3)]);
        assert!(p.has_edge(3, 2));
    }
}
