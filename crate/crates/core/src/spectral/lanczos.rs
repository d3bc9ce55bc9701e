//! Lanczos iterations for extreme eigenvalues and leading eigenvectors.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::operator::{axpy, dot, norm, DenseSymmetric, SymmetricOperator};
use super::tridiag;
use crate::error::{Error, Result};
use crate::rng::SeededRng;

/// Default relative tolerance for eigenvalue computations.
pub const DEFAULT_TOL: f64 = 1e-10;

const START_SEED: u64 = 0x1a2c_05e5_7a27_0001;

/// Largest and smallest eigenvalue of a symmetric matrix, and the largest
/// singular value derived from them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenExtremes {
    pub lambda_1: f64,
    pub lambda_n: f64,
    pub sigma_1: f64,
}

impl EigenExtremes {
    pub fn new(lambda_1: f64, lambda_n: f64) -> Self {
        Self {
            lambda_1,
            lambda_n,
            sigma_1: lambda_1.max(-lambda_n),
        }
    }
}

/// Reorthogonalization policy for the extreme-eigenvalue iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reorth {
    /// Plain three-term recurrence. Loss of orthogonality only produces
    /// duplicate copies of converged Ritz values, which is harmless when only
    /// the two ends of the spectrum are wanted.
    None,
    /// Classical Gram-Schmidt against the whole basis, applied twice.
    Full,
}

#[derive(Debug, Clone, Copy)]
pub struct ExtremeOptions {
    /// Converged when both residual bounds are at most `tol * max(1, |theta|)`.
    pub tol: f64,
    pub max_steps: usize,
    pub reorth: Reorth,
}

impl ExtremeOptions {
    pub fn for_dim(n: usize, tol: f64) -> Self {
        // Small problems get a full Krylov space; large ones the plain
        // recurrence, whose cost is dominated by the operator.
        let reorth = if n <= 400 { Reorth::Full } else { Reorth::None };
        let max_steps = match reorth {
            Reorth::Full => n,
            Reorth::None => 20 * n,
        };
        Self {
            tol,
            max_steps,
            reorth,
        }
    }
}

fn start_vector(n: usize) -> Vec<f64> {
    let mut rng = SeededRng::new(START_SEED);
    let mut v: Vec<f64> = (0..n).map(|_| rng.uniform() - 0.5).collect();
    let nrm = norm(&v);
    v.iter_mut().for_each(|x| *x /= nrm);
    v
}

fn orthogonalize(w: &mut [f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for q in basis {
            let c = dot(q, w);
            axpy(-c, q, w);
        }
    }
}

/// Extreme eigenvalues of `op`.
pub fn extreme_eigenvalues_with<O: SymmetricOperator + ?Sized>(op: &O, opts: ExtremeOptions) -> Result<EigenExtremes> {
    let n = op.dim();
    if n == 0 {
        return Err(Error::param("empty matrix"));
    }
    if n == 1 {
        let mut y = [0.0];
        op.apply(&[1.0], &mut y);
        if !y[0].is_finite() {
            return Err(Error::Numeric("non-finite operator output".into()));
        }
        return Ok(EigenExtremes::new(y[0], y[0]));
    }
    let mut v = start_vector(n);
    let mut v_prev = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut beta_prev = 0.0;
    let mut scale = 0.0f64;
    let max_steps = opts.max_steps.max(2);

    for step in 0..max_steps {
        op.apply(&v, &mut w);
        let alpha = dot(&v, &w);
        if !alpha.is_finite() {
            return Err(Error::Numeric("non-finite value in Lanczos iteration".into()));
        }
        axpy(-alpha, &v, &mut w);
        axpy(-beta_prev, &v_prev, &mut w);
        if opts.reorth == Reorth::Full {
            basis.push(v.clone());
            orthogonalize(&mut w, &basis);
        }
        let beta = norm(&w);
        alphas.push(alpha);
        scale = scale.max(alpha.abs()).max(beta);

        let k = alphas.len();
        let breakdown = beta <= 1e-13 * scale.max(f64::MIN_POSITIVE) || beta == 0.0;
        let exhausted = opts.reorth == Reorth::Full && k >= n;
        let check = breakdown || exhausted || step + 1 == max_steps || (k >= 8 && k % 4 == 0);
        if check {
            let (top, bottom) = tridiag::extreme_eigenvalues(&alphas, &betas);
            if breakdown || exhausted {
                return Ok(EigenExtremes::new(top, bottom));
            }
            let limit = opts.tol * top.abs().max(bottom.abs()).max(1.0);
            let r_top = beta * tridiag::eigenvector(&alphas, &betas, top)[k - 1].abs();
            let r_bottom = beta * tridiag::eigenvector(&alphas, &betas, bottom)[k - 1].abs();
            if r_top <= limit && r_bottom <= limit {
                return Ok(EigenExtremes::new(top, bottom));
            }
            if step + 1 == max_steps {
                return Err(Error::Numeric(format!(
                    "Lanczos did not converge in {max_steps} steps (residuals {r_top:.3e}, {r_bottom:.3e})"
                )));
            }
        }
        betas.push(beta);
        beta_prev = beta;
        std::mem::swap(&mut v_prev, &mut v);
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / beta;
        }
    }
    unreachable!("loop returns on its final step")
}

/// Largest and smallest eigenvalues of the symmetric matrix `m`, accurate to
/// `tol * max(1, ||m||)`.
pub fn symmetric_extreme_eigenvalues(m: &DenseSymmetric, tol: f64) -> Result<EigenExtremes> {
    if !(tol > 0.0) {
        return Err(Error::param(format!("tolerance must be positive, got {tol}")));
    }
    extreme_eigenvalues_with(m, ExtremeOptions::for_dim(m.n(), tol))
}

/// Eigenpairs of largest absolute eigenvalue.
#[derive(Debug, Clone)]
pub struct Subspace {
    /// Eigenvalues ordered by decreasing magnitude.
    pub values: Vec<f64>,
    /// Orthonormal columns, one per value.
    pub vectors: Vec<Vec<f64>>,
    pub converged: bool,
}

impl Subspace {
    /// Row-major `n x k` embedding (row `i` holds coordinate `i` of every
    /// column).
    pub fn rows(&self) -> Vec<Vec<f64>> {
        let n = self.vectors.first().map_or(0, Vec::len);
        (0..n).map(|i| self.vectors.iter().map(|c| c[i]).collect()).collect()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SubspaceOptions {
    pub tol: f64,
    /// Stop after this many steps even if unconverged (`None`: dimension).
    pub max_steps: Option<usize>,
    /// Fail instead of returning unconverged vectors.
    pub require_convergence: bool,
}

impl Default for SubspaceOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_steps: None,
            require_convergence: true,
        }
    }
}

fn ritz_selection(alphas: &[f64], betas: &[f64], count: usize) -> (Vec<f64>, DMatrix<f64>, Vec<usize>) {
    let k = alphas.len();
    let t = DMatrix::from_fn(k, k, |i, j| {
        if i == j {
            alphas[i]
        } else if i + 1 == j {
            betas[i]
        } else if j + 1 == i {
            betas[j]
        } else {
            0.0
        }
    });
    let eig = t.symmetric_eigen();
    let values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| {
        values[b]
            .abs()
            .total_cmp(&values[a].abs())
            .then(values[b].total_cmp(&values[a]))
    });
    order.truncate(count);
    (values, eig.eigenvectors, order)
}

/// The `count` eigenpairs of largest absolute eigenvalue of `op`, computed by
/// Lanczos with full reorthogonalization.
pub fn leading_eigenpairs<O: SymmetricOperator + ?Sized>(op: &O, count: usize, opts: SubspaceOptions) -> Result<Subspace> {
    let n = op.dim();
    if count == 0 || count > n {
        return Err(Error::param(format!(
            "requested {count} leading vectors of a dimension-{n} matrix"
        )));
    }
    let max_steps = opts.max_steps.unwrap_or(n).clamp(count.min(n), n);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(max_steps);
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut restart_rng = SeededRng::new(START_SEED ^ 0xffff);
    let mut v = start_vector(n);
    let mut w = vec![0.0; n];
    let mut scale = 0.0f64;
    let mut next_check = (2 * count + 8).min(max_steps);

    loop {
        op.apply(&v, &mut w);
        let alpha = dot(&v, &w);
        if !alpha.is_finite() {
            return Err(Error::Numeric("non-finite value in Lanczos iteration".into()));
        }
        basis.push(std::mem::take(&mut v));
        orthogonalize(&mut w, &basis);
        alphas.push(alpha);
        let mut beta = norm(&w);
        scale = scale.max(alpha.abs()).max(beta);
        let k = alphas.len();
        let breakdown = beta <= 1e-13 * scale.max(f64::MIN_POSITIVE);

        let done = k >= max_steps;
        if done || k >= next_check || (breakdown && k >= count) {
            let (values, vecs, order) = ritz_selection(&alphas, &betas, count);
            let top = values.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
            let resid_beta = if breakdown { 0.0 } else { beta };
            let converged = order.len() == count
                && order
                    .iter()
                    .all(|&c| resid_beta * vecs[(k - 1, c)].abs() <= opts.tol * top);
            if converged || done {
                if !converged && opts.require_convergence {
                    return Err(Error::Numeric(format!(
                        "leading eigenvectors did not converge in {k} Lanczos steps"
                    )));
                }
                let mut vectors: Vec<Vec<f64>> = order
                    .iter()
                    .map(|&c| {
                        let mut x = vec![0.0; n];
                        for (j, q) in basis.iter().enumerate() {
                            axpy(vecs[(j, c)], q, &mut x);
                        }
                        x
                    })
                    .collect();
                orthonormalize(&mut vectors);
                return Ok(Subspace {
                    values: order.iter().map(|&c| values[c]).collect(),
                    vectors,
                    converged,
                });
            }
            next_check = (k + k / 4 + 4).min(max_steps);
        }

        if breakdown {
            // Invariant subspace found; continue from a fresh direction
            // orthogonal to everything seen so far.
            w = (0..n).map(|_| restart_rng.uniform() - 0.5).collect();
            orthogonalize(&mut w, &basis);
            let nrm = norm(&w);
            if nrm == 0.0 {
                return Err(Error::Numeric("could not extend Krylov basis".into()));
            }
            w.iter_mut().for_each(|x| *x /= nrm);
            beta = 0.0;
            betas.push(beta);
            v = w.clone();
        } else {
            betas.push(beta);
            v = w.iter().map(|x| x / beta).collect();
        }
    }
}

/// Modified Gram-Schmidt, twice.
fn orthonormalize(cols: &mut [Vec<f64>]) {
    for _ in 0..2 {
        for i in 0..cols.len() {
            let (done, rest) = cols.split_at_mut(i);
            let c = &mut rest[0];
            for q in done.iter() {
                let d = dot(q, c);
                axpy(-d, q, c);
            }
            let nrm = norm(c);
            if nrm > 0.0 {
                c.iter_mut().for_each(|x| *x /= nrm);
            }
        }
    }
}

/// Orthonormal basis (`n x k0`, as columns) of the span of the `k0` leading
/// singular vectors of the symmetric matrix `m`.
pub fn leading_singular_subspace<O: SymmetricOperator + ?Sized>(m: &O, k0: usize) -> Result<Vec<Vec<f64>>> {
    Ok(leading_eigenpairs(m, k0, SubspaceOptions::default())?.vectors)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_matrix() {
        let e = symmetric_extreme_eigenvalues(&DenseSymmetric::zeros(5), DEFAULT_TOL).unwrap();
        assert_eq!((e.lambda_1, e.lambda_n, e.sigma_1), (0.0, 0.0, 0.0));
    }

    #[test]
    fn two_by_two_antidiagonal() {
        let m = DenseSymmetric::from_rows(&[vec![0.0, 3.0], vec![3.0, 0.0]]).unwrap();
        let e = symmetric_extreme_eigenvalues(&m, DEFAULT_TOL).unwrap();
        assert!((e.lambda_1 - 3.0).abs() < 1e-12);
        assert!((e.lambda_n + 3.0).abs() < 1e-12);
        assert_eq!(e.sigma_1, e.lambda_1.max(-e.lambda_n));
    }

    #[test]
    fn sigma_is_derived() {
        let e = EigenExtremes::new(1.0, -4.0);
        assert_eq!(e.sigma_1, 4.0);
    }

    #[test]
    fn rejects_bad_tolerance() {
        assert!(symmetric_extreme_eigenvalues(&DenseSymmetric::zeros(2), 0.0).is_err());
    }

    #[test]
    fn subspace_count_checked() {
        let m = DenseSymmetric::zeros(3);
        assert!(leading_singular_subspace(&m, 4).is_err());
        assert!(leading_singular_subspace(&m, 0).is_err());
    }

    #[test]
    fn identity_full_subspace() {
        let mut m = DenseSymmetric::zeros(6);
        for i in 0..6 {
            m.set_sym(i, i, 1.0);
        }
        let cols = leading_singular_subspace(&m, 6).unwrap();
        for a in 0..6 {
            for b in 0..6 {
                let d = dot(&cols[a], &cols[b]);
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((d - want).abs() < 1e-10);
            }
        }
    }
}
