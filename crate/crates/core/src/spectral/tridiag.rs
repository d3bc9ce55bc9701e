//! Small symmetric tridiagonal eigen-helpers for the Lanczos solvers.
//!
//! `diag` has length `k`, `off` length `k - 1`.

/// Number of eigenvalues strictly below `x` (Sturm sequence count).
pub(crate) fn count_below(diag: &[f64], off: &[f64], x: f64) -> usize {
    let tiny = f64::MIN_POSITIVE.sqrt();
    let mut count = 0;
    let mut d = diag[0] - x;
    if d < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        if d.abs() < tiny {
            d = -tiny;
        }
        d = diag[i] - x - off[i - 1] * off[i - 1] / d;
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

fn gershgorin(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let k = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..k {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 } + if i + 1 < k { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    (lo, hi)
}

/// Largest and smallest eigenvalues by bisection.
pub(crate) fn extreme_eigenvalues(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let k = diag.len();
    if k == 1 {
        return (diag[0], diag[0]);
    }
    let (glo, ghi) = gershgorin(diag, off);
    let pad = 1e-12 * (glo.abs().max(ghi.abs()) + 1.0);
    let bisect = |mut lo: f64, mut hi: f64, upper: bool| {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let c = count_below(diag, off, mid);
            let go_left = if upper { c == k } else { c >= 1 };
            if go_left {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let top = bisect(glo - pad, ghi + pad, true);
    let bottom = bisect(glo - pad, ghi + pad, false);
    (top, bottom)
}

/// Solves `(T - shift I) x = b` in place by Gaussian elimination with partial
/// pivoting; zero pivots are replaced by a tiny value, as inverse iteration
/// requires.
fn shifted_solve(diag: &[f64], off: &[f64], shift: f64, b: &mut [f64]) {
    let n = diag.len();
    let scale = diag.iter().chain(off).fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    let tiny = f64::EPSILON * scale;
    let mut d: Vec<f64> = diag.iter().map(|v| v - shift).collect();
    let dl = off.to_vec();
    let mut du = off.to_vec();
    let mut du2 = vec![0.0; n.saturating_sub(2)];
    for i in 0..n.saturating_sub(1) {
        if d[i].abs() >= dl[i].abs() {
            if d[i] == 0.0 {
                d[i] = tiny;
            }
            let fact = dl[i] / d[i];
            d[i + 1] -= fact * du[i];
            b[i + 1] -= fact * b[i];
        } else {
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            let temp = d[i + 1];
            d[i + 1] = du[i] - fact * temp;
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du2[i];
            }
            du[i] = temp;
            let tb = b[i];
            b[i] = b[i + 1];
            b[i + 1] = tb - fact * b[i + 1];
        }
    }
    if d[n - 1] == 0.0 {
        d[n - 1] = tiny;
    }
    b[n - 1] /= d[n - 1];
    if n > 1 {
        b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
    }
}

/// Unit eigenvector of `T` for the (accurate) eigenvalue `theta`, by two
/// steps of inverse iteration.
pub(crate) fn eigenvector(diag: &[f64], off: &[f64], theta: f64) -> Vec<f64> {
    let k = diag.len();
    let mut x: Vec<f64> = (0..k).map(|i| 1.0 + 0.1 * ((i * 7919) % 13) as f64).collect();
    for _ in 0..3 {
        shifted_solve(diag, off, theta, &mut x);
        let nrm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(nrm.is_finite() && nrm > 0.0) {
            break;
        }
        x.iter_mut().for_each(|v| *v /= nrm);
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_eigs(diag: &[f64], off: &[f64]) -> Vec<f64> {
        let k = diag.len();
        let m = nalgebra::DMatrix::from_fn(k, k, |i, j| {
            if i == j {
                diag[i]
            } else if i + 1 == j {
                off[i]
            } else if j + 1 == i {
                off[j]
            } else {
                0.0
            }
        });
        let mut e: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        e.sort_by(f64::total_cmp);
        e
    }

    #[test]
    fn bisection_matches_dense() {
        let diag = [2.0, -1.0, 0.5, 3.0, 0.0, 1.5];
        let off = [1.0, 0.3, -2.0, 0.7, 0.01];
        let e = dense_eigs(&diag, &off);
        let (top, bottom) = extreme_eigenvalues(&diag, &off);
        assert!((top - e[5]).abs() < 1e-13);
        assert!((bottom - e[0]).abs() < 1e-13);
        assert_eq!(count_below(&diag, &off, 0.0), e.iter().filter(|v| **v < 0.0).count());
    }

    #[test]
    fn inverse_iteration_residual() {
        let diag = [1.0, 2.0, 3.0, 4.0, 5.0];
        let off = [0.5, 0.5, 0.5, 0.5];
        let (top, _) = extreme_eigenvalues(&diag, &off);
        let v = eigenvector(&diag, &off, top);
        for i in 0..5 {
            let mut tv = diag[i] * v[i];
            if i > 0 {
                tv += off[i - 1] * v[i - 1];
            }
            if i + 1 < 5 {
                tv += off[i] * v[i + 1];
            }
            assert!((tv - top * v[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn single_entry() {
        assert_eq!(extreme_eigenvalues(&[3.0], &[]), (3.0, 3.0));
        assert_eq!(eigenvector(&[3.0], &[], 3.0).len(), 1);
    }
}
