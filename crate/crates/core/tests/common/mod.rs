//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, SymmetricEigen};
use sbm_gof::netgen::{AdjacencyGraph, BlockMatrix, Membership};
use sbm_gof::spectral::DenseSymmetric;

/// Airy function Ai on a fine grid, obtained by integrating `y'' = x y`
/// leftwards from `RIGHT` (where the asymptotic series is exact to rounding)
/// with classical RK4, and evaluated by cubic Hermite interpolation.
pub struct Airy {
    left: f64,
    h: f64,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

const RIGHT: f64 = 12.0;

/// Asymptotic expansion of `(Ai(x), Ai'(x))` for large positive `x`.
pub fn airy_asymptotic(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let pre = (-zeta).exp() / (2.0 * std::f64::consts::PI.sqrt());
    let (mut u, mut su, mut sv) = (1.0, 1.0, 1.0);
    for k in 1..30 {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
        let zk = zeta.powi(k);
        let sign = if k % 2 == 1 { -1.0 } else { 1.0 };
        su += sign * u / zk;
        sv += sign * v / zk;
        if (u / zk).abs() < 1e-18 {
            break;
        }
    }
    (pre / x.powf(0.25) * su, -pre * x.powf(0.25) * sv)
}

impl Airy {
    pub fn new(left: f64, h: f64) -> Self {
        let steps = ((RIGHT - left) / h).ceil() as usize;
        let h = (RIGHT - left) / steps as f64;
        let mut values = vec![0.0; steps + 1];
        let mut slopes = vec![0.0; steps + 1];
        let (mut y, mut dy) = airy_asymptotic(RIGHT);
        values[steps] = y;
        slopes[steps] = dy;
        let f = |x: f64, y: f64, dy: f64| (dy, x * y);
        for i in (0..steps).rev() {
            let x = left + (i + 1) as f64 * h;
            let s = -h;
            let (k1y, k1d) = f(x, y, dy);
            let (k2y, k2d) = f(x + s / 2.0, y + s / 2.0 * k1y, dy + s / 2.0 * k1d);
            let (k3y, k3d) = f(x + s / 2.0, y + s / 2.0 * k2y, dy + s / 2.0 * k2d);
            let (k4y, k4d) = f(x + s, y + s * k3y, dy + s * k3d);
            y += s / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
            dy += s / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
            values[i] = y;
            slopes[i] = dy;
        }
        Self {
            left,
            h,
            values,
            slopes,
        }
    }

    pub fn ai(&self, x: f64) -> f64 {
        if x >= RIGHT {
            return airy_asymptotic(x).0;
        }
        assert!(x >= self.left, "Airy grid starts at {}", self.left);
        let pos = (x - self.left) / self.h;
        let i = (pos.floor() as usize).min(self.values.len() - 2);
        let t = pos - i as f64;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (d0, d1) = (self.slopes[i] * self.h, self.slopes[i + 1] * self.h);
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * d0 + (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * d1
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// GOE Tracy-Widom cdf as the Fredholm determinant `det(I - K_s)` with
/// `K_s(x, y) = Ai(s + (x + y) / 2) / 2` on `L2(0, inf)`.
pub struct Tw1Oracle {
    airy: Airy,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Tw1Oracle {
    pub fn new() -> Self {
        let (nodes, weights) = gauss_legendre(120);
        Self {
            airy: Airy::new(-12.0, 2e-4),
            nodes,
            weights,
        }
    }

    pub fn cdf(&self, s: f64) -> f64 {
        // Kernel arguments run from s to s + upper / 2, which ends deep in
        // the Airy tail.
        let upper = (2.0 * (12.0 - s)).max(8.0);
        let m = self.nodes.len();
        let x: Vec<f64> = self.nodes.iter().map(|t| 0.5 * upper * (t + 1.0)).collect();
        let sw: Vec<f64> = self.weights.iter().map(|w| (0.5 * upper * w).sqrt()).collect();
        let mat = DMatrix::from_fn(m, m, |i, j| {
            let k = 0.5 * self.airy.ai(s + 0.5 * (x[i] + x[j]));
            f64::from(u8::from(i == j)) - sw[i] * k * sw[j]
        });
        mat.lu().determinant()
    }
}

/// Literature values of the GOE Tracy-Widom mean and variance.
pub const TW1_MEAN: f64 = -1.206_533_574_582_0;
pub const TW1_VARIANCE: f64 = 1.607_781_034_581_0;

/// Eigenvalues of a dense symmetric matrix, ascending.
pub fn dense_eigenvalues(m: &DenseSymmetric) -> Vec<f64> {
    let n = m.n();
    let mat = DMatrix::from_fn(n, n, |i, j| m.get(i, j));
    let mut ev: Vec<f64> = SymmetricEigen::new(mat).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Residual matrix from its definition, entry by entry, in original node
/// order.
pub fn residual_by_definition(graph: &AdjacencyGraph, m: &Membership, b: &BlockMatrix) -> Vec<Vec<f64>> {
    let n = graph.n();
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let p = b.get(m.label(i), m.label(j));
                out[i][j] = (f64::from(graph.entry(i, j)) - p) / ((n as f64 - 1.0) * p * (1.0 - p)).sqrt();
            }
        }
    }
    out
}

/// Plug-in block estimate from its definition.
pub fn block_estimate_by_definition(graph: &AdjacencyGraph, m: &Membership) -> Vec<Vec<f64>> {
    let k = m.k();
    let sizes = m.sizes();
    let mut counts = vec![vec![0.0; k]; k];
    for (i, j) in graph.edges() {
        let (a, b) = (m.label(i), m.label(j));
        counts[a][b] += 1.0;
        if a != b {
            counts[b][a] += 1.0;
        }
    }
    (0..k)
        .map(|a| {
            (0..k)
                .map(|b| {
                    let pairs = if a == b {
                        sizes[a] as f64 * (sizes[a] as f64 - 1.0) / 2.0
                    } else {
                        sizes[a] as f64 * sizes[b] as f64
                    };
                    counts[a][b] / pairs
                })
                .collect()
        })
        .collect()
}

/// Six-node fixture: edges (1,2), (1,4), (2,5), (4,5), (5,6) in one-based
/// numbering, communities {1,2,3} and {4,5,6}.
pub fn six_node_fixture() -> (AdjacencyGraph, Membership) {
    let g = AdjacencyGraph::from_edges(6, [(0, 1), (0, 3), (1, 4), (3, 4), (4, 5)]).unwrap();
    (g, Membership::proper(vec![0, 0, 0, 1, 1, 1], 2).unwrap())
}
