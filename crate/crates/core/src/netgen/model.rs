use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Community assignment of `n` nodes to communities `0..k`.
///
/// Labels are zero-based in memory; text formats and reports use the same
/// zero-based labels unless stated otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Membership {
    labels: Vec<usize>,
    k: usize,
}

impl Membership {
    pub fn new(labels: Vec<usize>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::param("community count must be positive"));
        }
        if let Some((i, &l)) = labels.iter().enumerate().find(|(_, &l)| l >= k) {
            return Err(Error::param(format!(
                "label {l} of node {i} outside 0..{k}"
            )));
        }
        Ok(Self { labels, k })
    }

    /// Membership in which every community `0..k` is used.
    pub fn proper(labels: Vec<usize>, k: usize) -> Result<Self> {
        let m = Self::new(labels, k)?;
        if let Some(c) = m.sizes().iter().position(|&s| s == 0) {
            return Err(Error::param(format!("community {c} is empty")));
        }
        Ok(m)
    }

    /// Every node in community 0.
    pub fn single(n: usize) -> Self {
        Self {
            labels: vec![0; n],
            k: 1,
        }
    }

    /// `k` contiguous communities of (nearly) equal size.
    pub fn balanced(n: usize, k: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::param(format!("cannot split {n} nodes into {k} communities")));
        }
        Self::proper((0..n).map(|i| i * k / n).collect(), k)
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    pub fn is_proper(&self) -> bool {
        self.sizes().iter().all(|&s| s > 0)
    }

    /// Node indices of each community, in increasing order.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (i, &l) in self.labels.iter().enumerate() {
            out[l].push(i);
        }
        out
    }

    /// Renames community `c` to `perm[c]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.k {
            return Err(Error::param("label permutation has wrong length"));
        }
        Self::new(self.labels.iter().map(|&l| perm[l]).collect(), self.k)
    }

    /// Membership of the subset `nodes` (new node `a` is old node `nodes[a]`).
    pub fn restricted(&self, nodes: &[usize]) -> Self {
        Self {
            labels: nodes.iter().map(|&v| self.labels[v]).collect(),
            k: self.k,
        }
    }

    /// Drops unused communities and renumbers the rest by first appearance.
    pub fn compacted(&self) -> Self {
        let mut map = vec![usize::MAX; self.k];
        let mut next = 0;
        let labels = self
            .labels
            .iter()
            .map(|&l| {
                if map[l] == usize::MAX {
                    map[l] = next;
                    next += 1;
                }
                map[l]
            })
            .collect();
        Self {
            labels,
            k: next.max(1),
        }
    }
}

/// Symmetric `k x k` matrix of community-wise edge probabilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockMatrix {
    k: usize,
    probs: Vec<f64>,
}

impl BlockMatrix {
    /// Row-major `k x k` entries; must be symmetric with entries in [0, 1].
    pub fn new(k: usize, probs: Vec<f64>) -> Result<Self> {
        if k == 0 {
            return Err(Error::param("block matrix dimension must be positive"));
        }
        if probs.len() != k * k {
            return Err(Error::param(format!(
                "block matrix needs {} entries, got {}",
                k * k,
                probs.len()
            )));
        }
        for a in 0..k {
            for b in 0..k {
                let v = probs[a * k + b];
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::param(format!(
                        "block probability ({a}, {b}) = {v} outside [0, 1]"
                    )));
                }
                if (v - probs[b * k + a]).abs() > 1e-12 {
                    return Err(Error::param(format!(
                        "block matrix not symmetric at ({a}, {b})"
                    )));
                }
            }
        }
        Ok(Self { k, probs })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let k = rows.len();
        if rows.iter().any(|r| r.len() != k) {
            return Err(Error::param("block matrix rows must be square"));
        }
        Self::new(k, rows.concat())
    }

    pub fn from_fn(k: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let probs = (0..k).flat_map(|a| (0..k).map(move |b| (a, b))).map(|(a, b)| f(a, b)).collect();
        Self::new(k, probs)
    }

    /// `within` on the diagonal, `between` elsewhere.
    pub fn planted(k: usize, within: f64, between: f64) -> Result<Self> {
        Self::from_fn(k, |a, b| if a == b { within } else { between })
    }

    /// Constant matrix.
    pub fn constant(k: usize, p: f64) -> Result<Self> {
        Self::from_fn(k, |_, _| p)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.probs[a * self.k + b]
    }

    pub fn row(&self, a: usize) -> &[f64] {
        &self.probs[a * self.k..(a + 1) * self.k]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.probs
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.k).map(|a| self.row(a).to_vec()).collect()
    }

    /// Whether all rows are pairwise distinct (the identifiability condition
    /// for a model with exactly `k` communities).
    pub fn has_distinct_rows(&self) -> bool {
        (0..self.k).all(|a| (a + 1..self.k).all(|b| self.row(a) != self.row(b)))
    }

    /// Same matrix with communities renamed: entry `(perm[a], perm[b])` of the
    /// result equals entry `(a, b)` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.k {
            return Err(Error::param("block permutation has wrong length"));
        }
        let mut probs = vec![0.0; self.k * self.k];
        for a in 0..self.k {
            for b in 0..self.k {
                probs[perm[a] * self.k + perm[b]] = self.get(a, b);
            }
        }
        Self::new(self.k, probs)
    }

    /// Singular values of the matrix (absolute eigenvalues, since it is
    /// symmetric), in decreasing order.
    pub fn singular_values(&self) -> Vec<f64> {
        let m = nalgebra::DMatrix::from_row_slice(self.k, self.k, &self.probs);
        let mut s: Vec<f64> = m
            .symmetric_eigenvalues()
            .iter()
            .map(|v| v.abs())
            .collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }
}

/// Degree-corrected block model: edge probability `psi_i psi_j B[g_i][g_j]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DcbmParams {
    pub membership: Membership,
    pub blocks: BlockMatrix,
    pub activeness: Vec<f64>,
}

impl DcbmParams {
    pub fn new(membership: Membership, blocks: BlockMatrix, activeness: Vec<f64>) -> Result<Self> {
        if membership.k() != blocks.k() {
            return Err(Error::param(format!(
                "membership has {} communities but block matrix is {}x{}",
                membership.k(),
                blocks.k(),
                blocks.k()
            )));
        }
        if activeness.len() != membership.n() {
            return Err(Error::param(format!(
                "activeness has length {}, expected {}",
                activeness.len(),
                membership.n()
            )));
        }
        if let Some(v) = activeness.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::param(format!("activeness {v} outside [0, 1]")));
        }
        Ok(Self {
            membership,
            blocks,
            activeness,
        })
    }
}

/// Mixed-membership block model: edge probability `phi_i^T B phi_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MmbmParams {
    pub blocks: BlockMatrix,
    pub mixing: Vec<Vec<f64>>,
}

impl MmbmParams {
    pub fn new(blocks: BlockMatrix, mixing: Vec<Vec<f64>>) -> Result<Self> {
        for (i, row) in mixing.iter().enumerate() {
            if row.len() != blocks.k() {
                return Err(Error::param(format!(
                    "mixing row {i} has length {}, expected {}",
                    row.len(),
                    blocks.k()
                )));
            }
            let sum: f64 = row.iter().sum();
            if row.iter().any(|v| !(*v >= 0.0)) || (sum - 1.0).abs() > 1e-9 {
                return Err(Error::param(format!(
                    "mixing row {i} is not a probability vector (sum {sum})"
                )));
            }
        }
        Ok(Self { blocks, mixing })
    }

    pub fn n(&self) -> usize {
        self.mixing.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_validation() {
        assert!(Membership::new(vec![0, 2], 2).is_err());
        assert!(Membership::proper(vec![0, 0], 2).is_err());
        let m = Membership::proper(vec![1, 0, 1], 2).unwrap();
        assert_eq!(m.sizes(), vec![1, 2]);
        assert_eq!(m.members(), vec![vec![1], vec![0, 2]]);
        assert_eq!(m.compacted().labels(), &[0, 1, 0]);
    }

    #[test]
    fn balanced_membership() {
        let m = Membership::balanced(10, 3).unwrap();
        assert_eq!(m.sizes(), vec![4, 3, 3]);
        assert!(Membership::balanced(2, 3).is_err());
    }

    #[test]
    fn block_matrix_validation() {
        assert!(BlockMatrix::new(2, vec![0.1, 0.2, 0.3, 0.4]).is_err());
        assert!(BlockMatrix::new(1, vec![1.5]).is_err());
        assert!(BlockMatrix::new(2, vec![0.1; 3]).is_err());
        let b = BlockMatrix::planted(3, 0.6, 0.2).unwrap();
        assert_eq!(b.get(1, 1), 0.6);
        assert_eq!(b.get(0, 2), 0.2);
        assert!(b.has_distinct_rows());
        assert!(!BlockMatrix::constant(2, 0.3).unwrap().has_distinct_rows());
    }

    #[test]
    fn block_singular_values() {
        let b = BlockMatrix::planted(2, 0.6, 0.2).unwrap();
        let s = b.singular_values();
        assert!((s[0] - 0.8).abs() < 1e-12 && (s[1] - 0.4).abs() < 1e-12);
    }

    #[test]
    fn block_permutation() {
        let b = BlockMatrix::from_rows(&[vec![0.1, 0.2], vec![0.2, 0.9]]).unwrap();
        let p = b.permuted(&[1, 0]).unwrap();
        assert_eq!(p.get(0, 0), 0.9);
        assert_eq!(p.get(1, 1), 0.1);
    }

    #[test]
    fn param_validation() {
        let m = Membership::balanced(4, 2).unwrap();
        let b = BlockMatrix::planted(2, 0.5, 0.1).unwrap();
        assert!(DcbmParams::new(m.clone(), b.clone(), vec![1.0; 3]).is_err());
        assert!(DcbmParams::new(m.clone(), b.clone(), vec![1.0, 1.0, 2.0, 0.0]).is_err());
        assert!(DcbmParams::new(m, b.clone(), vec![0.5; 4]).is_ok());
        assert!(MmbmParams::new(b.clone(), vec![vec![0.5, 0.4]]).is_err());
        assert!(MmbmParams::new(b.clone(), vec![vec![1.2, -0.2]]).is_err());
        assert!(MmbmParams::new(b, vec![vec![0.25, 0.75]]).is_ok());
    }
}
