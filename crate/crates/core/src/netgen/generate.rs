//! Random graph generators.
//!
//! All generators visit node pairs `i < j` in row-major order and consume
//! exactly one uniform draw per pair, so models that reduce to the same
//! per-pair probabilities produce identical graphs from the same stream.

use rand_distr::{Distribution, Gamma};

use super::graph::AdjacencyGraph;
use super::model::{BlockMatrix, DcbmParams, Membership, MmbmParams};
use crate::error::{Error, Result};
use crate::rng::SeededRng;

fn sample_pairs(n: usize, rng: &mut SeededRng, prob: impl Fn(usize, usize) -> f64) -> AdjacencyGraph {
    let mut upper = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.uniform() < prob(i, j) {
                upper.push((i, j));
            }
        }
    }
    AdjacencyGraph::from_sorted_upper(n, &upper)
}

/// Stochastic block model: independent Bernoulli(`B[g_i][g_j]`) edges.
pub fn generate_sbm(membership: &Membership, blocks: &BlockMatrix, rng: &mut SeededRng) -> Result<AdjacencyGraph> {
    if membership.k() != blocks.k() {
        return Err(Error::param(format!(
            "membership has {} communities but block matrix is {}x{}",
            membership.k(),
            blocks.k(),
            blocks.k()
        )));
    }
    if !membership.is_proper() {
        return Err(Error::param("membership leaves a community empty"));
    }
    let g = membership.labels();
    Ok(sample_pairs(membership.n(), rng, |i, j| blocks.get(g[i], g[j])))
}

/// Degree-corrected block model.
pub fn generate_dcbm(params: &DcbmParams, rng: &mut SeededRng) -> Result<AdjacencyGraph> {
    let g = params.membership.labels();
    let psi = &params.activeness;
    if psi.len() != g.len() {
        return Err(Error::param("activeness length differs from membership length"));
    }
    Ok(sample_pairs(g.len(), rng, |i, j| psi[i] * psi[j] * params.blocks.get(g[i], g[j])))
}

/// Mixed-membership block model.
pub fn generate_mmbm(params: &MmbmParams, rng: &mut SeededRng) -> Result<AdjacencyGraph> {
    let params = MmbmParams::new(params.blocks.clone(), params.mixing.clone())?;
    let k = params.blocks.k();
    // bphi[j] = B phi_j
    let bphi: Vec<Vec<f64>> = params
        .mixing
        .iter()
        .map(|phi| {
            (0..k)
                .map(|a| params.blocks.row(a).iter().zip(phi).map(|(b, p)| b * p).sum())
                .collect()
        })
        .collect();
    let mixing = &params.mixing;
    Ok(sample_pairs(params.n(), rng, |i, j| {
        mixing[i].iter().zip(&bphi[j]).map(|(p, q)| p * q).sum::<f64>()
    }))
}

/// `n` independent rows from a symmetric Dirichlet(`alpha`, ..., `alpha`) on
/// `k` coordinates.
pub fn sample_dirichlet_rows(n: usize, k: usize, alpha: f64, rng: &mut SeededRng) -> Result<Vec<Vec<f64>>> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::param(format!("Dirichlet parameter must be positive, got {alpha}")));
    }
    if k == 0 {
        return Err(Error::param("Dirichlet dimension must be positive"));
    }
    if k == 1 {
        return Ok(vec![vec![1.0]; n]);
    }
    let gamma = Gamma::new(alpha, 1.0).map_err(|e| Error::param(e.to_string()))?;
    let mut rows = Vec::with_capacity(n);
    while rows.len() < n {
        let draw: Vec<f64> = (0..k).map(|_| gamma.sample(rng)).collect();
        let sum: f64 = draw.iter().sum();
        // All coordinates can underflow for tiny alpha; redraw.
        if sum > 0.0 && sum.is_finite() {
            rows.push(draw.into_iter().map(|v| v / sum).collect());
        }
    }
    Ok(rows)
}

/// Labels drawn iid uniformly from `0..k`, redrawn until every community is
/// non-empty.
pub fn random_membership(n: usize, k: usize, rng: &mut SeededRng) -> Result<Membership> {
    if k == 0 || k > n {
        return Err(Error::param(format!("cannot draw {k} non-empty communities over {n} nodes")));
    }
    for _ in 0..10_000 {
        let labels: Vec<usize> = (0..n).map(|_| rng.index(k)).collect();
        let m = Membership::new(labels, k)?;
        if m.is_proper() {
            return Ok(m);
        }
    }
    Err(Error::Numeric(format!(
        "failed to draw a membership with {k} non-empty communities over {n} nodes"
    )))
}

/// Activeness values drawn iid from Unif(`lo`, `hi`).
pub fn uniform_activeness(n: usize, lo: f64, hi: f64, rng: &mut SeededRng) -> Result<Vec<f64>> {
    if !(0.0 <= lo && lo <= hi && hi <= 1.0) {
        return Err(Error::param(format!("activeness range [{lo}, {hi}] not inside [0, 1]")));
    }
    Ok((0..n).map(|_| lo + (hi - lo) * rng.uniform()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn planted() -> BlockMatrix {
        BlockMatrix::from_fn(2, |a, b| 0.2 + 0.4 * f64::from(u8::from(a == b))).unwrap()
    }

    #[test]
    fn degenerate_probabilities() {
        let m = Membership::proper(vec![0, 1, 0, 1], 2).unwrap();
        let mut rng = SeededRng::new(1);
        let full = generate_sbm(&m, &BlockMatrix::constant(2, 1.0).unwrap(), &mut rng).unwrap();
        assert_eq!(full, AdjacencyGraph::complete(4));
        let none = generate_sbm(&m, &BlockMatrix::constant(2, 0.0).unwrap(), &mut rng).unwrap();
        assert_eq!(none, AdjacencyGraph::empty(4));
    }

    #[test]
    fn sbm_dimension_mismatch() {
        let m = Membership::balanced(6, 3).unwrap();
        let err = generate_sbm(&m, &planted(), &mut SeededRng::new(0));
        assert!(matches!(err, Err(Error::Parameter(_))));
    }

    #[test]
    fn dcbm_with_unit_activeness_matches_sbm() {
        let m = Membership::balanced(60, 2).unwrap();
        let sbm = generate_sbm(&m, &planted(), &mut SeededRng::new(5)).unwrap();
        let p = DcbmParams::new(m, planted(), vec![1.0; 60]).unwrap();
        let dcbm = generate_dcbm(&p, &mut SeededRng::new(5)).unwrap();
        assert_eq!(sbm, dcbm);
    }

    #[test]
    fn dcbm_zero_activeness_is_empty() {
        let m = Membership::balanced(20, 2).unwrap();
        let p = DcbmParams::new(m, planted(), vec![0.0; 20]).unwrap();
        assert_eq!(generate_dcbm(&p, &mut SeededRng::new(2)).unwrap().edge_count(), 0);
    }

    #[test]
    fn mmbm_basis_rows_match_sbm() {
        let m = Membership::balanced(50, 2).unwrap();
        let mixing = m
            .labels()
            .iter()
            .map(|&l| if l == 0 { vec![1.0, 0.0] } else { vec![0.0, 1.0] })
            .collect();
        let p = MmbmParams::new(planted(), mixing).unwrap();
        let a = generate_mmbm(&p, &mut SeededRng::new(8)).unwrap();
        let b = generate_sbm(&m, &planted(), &mut SeededRng::new(8)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn mmbm_single_community_is_erdos_renyi() {
        let b = BlockMatrix::constant(1, 0.3).unwrap();
        let p = MmbmParams::new(b.clone(), vec![vec![1.0]; 40]).unwrap();
        let a = generate_mmbm(&p, &mut SeededRng::new(4)).unwrap();
        let e = generate_sbm(&Membership::single(40), &b, &mut SeededRng::new(4)).unwrap();
        assert_eq!(a, e);
    }

    #[test]
    fn mmbm_rejects_non_stochastic_rows() {
        let p = MmbmParams {
            blocks: planted(),
            mixing: vec![vec![0.7, 0.7]],
        };
        assert!(generate_mmbm(&p, &mut SeededRng::new(0)).is_err());
    }

    #[test]
    fn dirichlet_edge_cases() {
        let mut rng = SeededRng::new(3);
        assert!(sample_dirichlet_rows(3, 2, 0.0, &mut rng).is_err());
        assert!(sample_dirichlet_rows(3, 2, -1.0, &mut rng).is_err());
        assert_eq!(sample_dirichlet_rows(3, 1, 0.5, &mut rng).unwrap(), vec![vec![1.0]; 3]);
        let rows = sample_dirichlet_rows(1000, 2, 1e6, &mut rng).unwrap();
        let mean = rows.iter().map(|r| r[0]).sum::<f64>() / 1000.0;
        let sd = (rows.iter().map(|r| (r[0] - mean).powi(2)).sum::<f64>() / 999.0).sqrt();
        assert!(sd < 0.01);
        assert!(rows.iter().all(|r| (r.iter().sum::<f64>() - 1.0).abs() < 1e-9));
    }

    #[test]
    fn random_membership_is_proper() {
        let mut rng = SeededRng::new(12);
        for _ in 0..50 {
            assert!(random_membership(4, 4, &mut rng).unwrap().is_proper());
        }
        assert!(random_membership(3, 4, &mut rng).is_err());
    }
}
