//! Bit-packed adjacency rows for dense graphs and the matching residual
//! operator.
//!
//! Columns follow the sorted layout, with each community padded to a whole
//! number of bytes. A matvec first tabulates, for every byte position, the
//! 256 possible partial sums of `x` over its eight columns, then reads one
//! table entry per byte of each row.

use std::sync::Mutex;

use super::residual::{BlockScaling, SortedLayout};
use crate::netgen::{AdjacencyGraph, BlockMatrix};
use crate::rng::SeededRng;
use crate::spectral::SymmetricOperator;

pub(crate) struct PackedRows {
    n: usize,
    /// Bytes per row.
    chunks: usize,
    /// Community `c` occupies bytes `chunk_starts[c]..chunk_starts[c + 1]`.
    chunk_starts: Vec<usize>,
    /// Padded column of each sorted position.
    col: Vec<usize>,
    bytes: Vec<u8>,
}

impl PackedRows {
    fn empty(layout: &SortedLayout) -> Self {
        let k = layout.starts.len() - 1;
        let n = layout.starts[k];
        let mut chunk_starts = vec![0; k + 1];
        let mut col = Vec::with_capacity(n);
        for c in 0..k {
            let size = layout.starts[c + 1] - layout.starts[c];
            let first = chunk_starts[c] * 8;
            col.extend(first..first + size);
            chunk_starts[c + 1] = chunk_starts[c] + size.div_ceil(8);
        }
        let chunks = chunk_starts[k];
        Self {
            n,
            chunks,
            chunk_starts,
            col,
            bytes: vec![0; n * chunks],
        }
    }

    fn set(&mut self, i: usize, j: usize) {
        let cj = self.col[j];
        self.bytes[i * self.chunks + cj / 8] |= 1 << (cj % 8);
        let ci = self.col[i];
        self.bytes[j * self.chunks + ci / 8] |= 1 << (ci % 8);
    }

    /// Packs a graph already in sorted layout.
    pub fn from_graph(graph: &AdjacencyGraph, layout: &SortedLayout) -> Self {
        let mut rows = Self::empty(layout);
        for (i, j) in graph.edges() {
            rows.set(i, j);
        }
        rows
    }

    /// Block-model graph in sorted layout, drawing pairs exactly as
    /// `generate_sbm` does.
    pub fn sample(layout: &SortedLayout, blocks: &BlockMatrix, rng: &mut SeededRng) -> Self {
        let mut rows = Self::empty(layout);
        let g = layout.membership.labels();
        for i in 0..rows.n {
            let prow = blocks.row(g[i]);
            for j in i + 1..rows.n {
                if rng.uniform() < prow[g[j]] {
                    rows.set(i, j);
                }
            }
        }
        rows
    }

    /// Packing pays off once rows hold about one edge per byte.
    pub fn worthwhile(n: usize, k: usize, edges: f64) -> bool {
        let chunks = n.div_ceil(8) + k;
        2.0 * edges / n.max(1) as f64 >= chunks as f64
    }
}

pub(crate) struct PackedResidual<'a> {
    rows: &'a PackedRows,
    layout: &'a SortedLayout,
    scaling: &'a BlockScaling,
    table: Mutex<Vec<[f64; 256]>>,
}

impl<'a> PackedResidual<'a> {
    pub fn new(rows: &'a PackedRows, layout: &'a SortedLayout, scaling: &'a BlockScaling) -> Self {
        Self {
            rows,
            layout,
            scaling,
            table: Mutex::new(vec![[0.0; 256]; rows.chunks]),
        }
    }
}

impl SymmetricOperator for PackedResidual<'_> {
    fn dim(&self) -> usize {
        self.rows.n
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let rows = self.rows;
        let k = self.scaling.k;
        let starts = &self.layout.starts;
        let mut padded = vec![0.0; rows.chunks * 8];
        for (s, &c) in rows.col.iter().enumerate() {
            padded[c] = x[s];
        }
        let mut guard = self.table.lock().unwrap_or_else(|e| e.into_inner());
        let table: &mut [[f64; 256]] = &mut guard;
        for (tab, xs) in table.iter_mut().zip(padded.chunks_exact(8)) {
            tab[0] = 0.0;
            for b in 1..256usize {
                tab[b] = tab[b & (b - 1)] + xs[b.trailing_zeros() as usize];
            }
        }
        let block_sums: Vec<f64> = (0..k).map(|c| x[starts[c]..starts[c + 1]].iter().sum()).collect();
        let offset: Vec<f64> = (0..k)
            .map(|a| (0..k).map(|c| self.scaling.center[a * k + c] * block_sums[c]).sum())
            .collect();
        let labels = self.layout.membership.labels();
        for (i, yi) in y.iter_mut().enumerate() {
            let a = labels[i];
            let row = &rows.bytes[i * rows.chunks..(i + 1) * rows.chunks];
            let mut acc = 0.0;
            for c in 0..k {
                let lo = rows.chunk_starts[c];
                let hi = rows.chunk_starts[c + 1];
                acc += self.scaling.inv_scale[a * k + c] * segment_sum(&table[lo..hi], &row[lo..hi]);
            }
            *yi = acc - offset[a] + self.scaling.center[a * k + a] * x[i];
        }
    }
}

fn segment_sum(tables: &[[f64; 256]], bytes: &[u8]) -> f64 {
    let mut acc = [0.0; 4];
    let mut tabs = tables.chunks_exact(4);
    let mut bs = bytes.chunks_exact(4);
    for (t, b) in (&mut tabs).zip(&mut bs) {
        acc[0] += t[0][b[0] as usize];
        acc[1] += t[1][b[1] as usize];
        acc[2] += t[2][b[2] as usize];
        acc[3] += t[3][b[3] as usize];
    }
    for (t, &b) in tabs.remainder().iter().zip(bs.remainder()) {
        acc[0] += t[b as usize];
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3])
}
