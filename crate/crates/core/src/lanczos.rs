//! Restarted Lanczos iteration for the lowest eigenpair of a symmetric
//! operator acting on matrices (Frobenius inner product). Full
//! reorthogonalization keeps the Krylov basis clean; each restart begins from
//! the current Ritz vector.

use nalgebra::DMatrix;

#[derive(Debug, Clone)]
pub(crate) struct Eigenpair {
    pub value: f64,
    pub vector: DMatrix<f64>,
    pub matvecs: usize,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Failure {
    pub matvecs: usize,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Settings {
    pub krylov_dim: usize,
    pub max_restarts: usize,
    /// Converged once `||H x - theta x|| <= tolerance * max(1, |theta|)`.
    pub tolerance: f64,
}

/// `y += a x`
fn axpy(y: &mut DMatrix<f64>, a: f64, x: &DMatrix<f64>) {
    for (yi, xi) in y.as_mut_slice().iter_mut().zip(x.as_slice()) {
        *yi += a * xi;
    }
}

/// Number of eigenvalues of the tridiagonal matrix below `x` (Sturm count).
fn count_below(alphas: &[f64], betas: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut d = 1.0;
    for (i, a) in alphas.iter().enumerate() {
        let b2 = if i == 0 {
            0.0
        } else {
            betas[i - 1] * betas[i - 1]
        };
        d = a - x - if i == 0 { 0.0 } else { b2 / d };
        if d == 0.0 {
            d = f64::EPSILON * (a.abs() + x.abs()).max(f64::MIN_POSITIVE);
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Solves `(T - shift) y = rhs` by Gaussian elimination with partial
/// pivoting on the band.
fn shifted_solve(alphas: &[f64], betas: &[f64], shift: f64, rhs: &[f64]) -> Vec<f64> {
    let m = alphas.len();
    let tiny = f64::EPSILON
        * alphas
            .iter()
            .chain(betas)
            .fold(1.0f64, |acc, v| acc.max(v.abs()));
    // rows hold (diag, super1, super2) after pivoting
    let mut d: Vec<f64> = alphas.iter().map(|a| a - shift).collect();
    let mut u1: Vec<f64> = (0..m)
        .map(|i| if i + 1 < m { betas[i] } else { 0.0 })
        .collect();
    let mut u2 = vec![0.0; m];
    let mut l: Vec<f64> = (0..m)
        .map(|i| if i + 1 < m { betas[i] } else { 0.0 })
        .collect();
    let mut b = rhs.to_vec();
    for i in 0..m.saturating_sub(1) {
        if l[i].abs() > d[i].abs() {
            // swap rows i and i+1
            let (di, u1i, u2i) = (d[i], u1[i], u2[i]);
            d[i] = l[i];
            u1[i] = d[i + 1];
            u2[i] = u1[i + 1];
            l[i] = di;
            d[i + 1] = u1i;
            u1[i + 1] = u2i;
            b.swap(i, i + 1);
        }
        if d[i].abs() < tiny {
            d[i] = tiny;
        }
        let f = l[i] / d[i];
        d[i + 1] -= f * u1[i];
        if i + 1 < m {
            u1[i + 1] -= f * u2[i];
        }
        b[i + 1] -= f * b[i];
    }
    if d[m - 1].abs() < tiny {
        d[m - 1] = tiny;
    }
    let mut y = vec![0.0; m];
    for i in (0..m).rev() {
        let mut v = b[i];
        if i + 1 < m {
            v -= u1[i] * y[i + 1];
        }
        if i + 2 < m {
            v -= u2[i] * y[i + 2];
        }
        y[i] = v / d[i];
    }
    y
}

/// Lowest eigenvalue (bisection to adjacent floats) and unit eigenvector
/// (inverse iteration) of the symmetric tridiagonal matrix.
fn lowest_ritz(alphas: &[f64], betas: &[f64]) -> (f64, Vec<f64>) {
    let m = alphas.len();
    let radius = |i: usize| {
        (if i > 0 { betas[i - 1].abs() } else { 0.0 })
            + (if i + 1 < m { betas[i].abs() } else { 0.0 })
    };
    let mut lo = (0..m)
        .map(|i| alphas[i] - radius(i))
        .fold(f64::INFINITY, f64::min);
    let mut hi = (0..m)
        .map(|i| alphas[i] + radius(i))
        .fold(f64::NEG_INFINITY, f64::max);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if count_below(alphas, betas, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let theta = 0.5 * (lo + hi);
    let mut v = vec![1.0; m];
    for _ in 0..3 {
        v = shifted_solve(alphas, betas, theta, &v);
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
    }
    (theta, v)
}

/// `project` must commute with `op`; it confines the iteration to one
/// symmetry sector.
pub(crate) fn lowest_eigenpair(
    op: impl Fn(&DMatrix<f64>) -> DMatrix<f64>,
    project: impl Fn(&DMatrix<f64>) -> DMatrix<f64>,
    start: &DMatrix<f64>,
    settings: Settings,
) -> Result<Eigenpair, Failure> {
    let mut x = project(start);
    x /= x.norm();
    let mut matvecs = 0;
    let mut residual = f64::INFINITY;
    for _ in 0..settings.max_restarts {
        let mut basis: Vec<DMatrix<f64>> = vec![x.clone()];
        let mut alphas = Vec::with_capacity(settings.krylov_dim);
        let mut betas = Vec::with_capacity(settings.krylov_dim);
        loop {
            let j = basis.len() - 1;
            let mut w = project(&op(&basis[j]));
            matvecs += 1;
            alphas.push(basis[j].dot(&w));
            for _ in 0..2 {
                for q in &basis {
                    let c = q.dot(&w);
                    axpy(&mut w, -c, q);
                }
            }
            let beta = w.norm();
            let (theta, s) = lowest_ritz(&alphas, &betas);
            let estimate = beta * s[j].abs();
            let scale = theta.abs().max(1.0);
            let exhausted = basis.len() >= settings.krylov_dim || beta < 1e-14 * scale;
            if estimate <= settings.tolerance * scale || exhausted {
                let mut ritz = DMatrix::zeros(x.nrows(), x.ncols());
                for (c, q) in s.iter().zip(&basis) {
                    axpy(&mut ritz, *c, q);
                }
                ritz /= ritz.norm();
                let mut r = project(&op(&ritz));
                matvecs += 1;
                axpy(&mut r, -theta, &ritz);
                residual = r.norm();
                x = ritz;
                if residual <= settings.tolerance * scale {
                    return Ok(Eigenpair {
                        value: theta,
                        vector: x,
                        matvecs,
                    });
                }
                break;
            }
            betas.push(beta);
            basis.push(w / beta);
        }
    }
    Err(Failure { matvecs, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::SymmetricEigen;

    #[test]
    fn tridiagonal_lowest_pair() {
        let alphas = [1.0, 5.0, 2.0, -0.5];
        let betas = [2.8e-8, 0.7, 1.3];
        let (theta, v) = lowest_ritz(&alphas, &betas);
        let t = DMatrix::from_fn(4, 4, |i, j| {
            if i == j {
                alphas[i]
            } else if i.abs_diff(j) == 1 {
                betas[i.min(j)]
            } else {
                0.0
            }
        });
        let reference = SymmetricEigen::new(t.clone()).eigenvalues.min();
        assert!((theta - reference).abs() < 1e-14);
        let tv = &t * nalgebra::DVector::from_vec(v.clone());
        for i in 0..4 {
            assert!((tv[i] - theta * v[i]).abs() < 1e-14);
        }
        // a nearly decoupled leading block keeps its tiny last component
        let (_, v) = lowest_ritz(&[1.0, 5.0], &[2.8e-8]);
        assert!((v[1].abs() - 7e-9).abs() < 1e-15);
    }

    #[test]
    fn finds_lowest_eigenvalue_of_diagonal_operator() {
        let n = 30;
        let diag = DMatrix::from_fn(n, n, |i, j| 1.0 + (i * n + j) as f64 * 0.01);
        let op = |v: &DMatrix<f64>| v.component_mul(&diag);
        let start = DMatrix::from_element(n, n, 1.0);
        let settings = Settings {
            krylov_dim: 40,
            max_restarts: 100,
            tolerance: 1e-10,
        };
        let pair = lowest_eigenpair(op, |v| v.clone(), &start, settings).unwrap();
        assert!((pair.value - 1.0).abs() < 1e-10);
        assert!((pair.vector[(0, 0)].abs() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn reports_failure_when_budget_is_too_small() {
        let n = 20;
        let diag = DMatrix::from_fn(n, n, |i, j| (i * n + j) as f64);
        let op = |v: &DMatrix<f64>| v.component_mul(&diag);
        let start = DMatrix::from_element(n, n, 1.0);
        let settings = Settings {
            krylov_dim: 3,
            max_restarts: 2,
            tolerance: 1e-14,
        };
        let failure = lowest_eigenpair(op, |v| v.clone(), &start, settings).unwrap_err();
        assert!(failure.residual > 0.0 && failure.matvecs > 0);
    }
}
