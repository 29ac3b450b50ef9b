//! Gauss–Legendre rules, composite panel meshes, and spectral cumulative
//! integration on those panels.

use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1, "quadrature order must be positive");
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let n = order as f64;
    for i in 0..order.div_ceil(2) {
        // Tricomi's initial guess, then Newton on P_n
        let mut t = (PI * (i as f64 + 0.75) / (n + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(order, t);
            dp = d;
            let step = p / d;
            t -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(order, t);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - t * t) * dp * dp);
        nodes[i] = -t;
        nodes[order - 1 - i] = t;
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    if order % 2 == 1 {
        nodes[order / 2] = 0.0;
    }
    (nodes, weights)
}

/// `P_n(t)` and `P_n'(t)`.
fn legendre_with_derivative(n: usize, t: f64) -> (f64, f64) {
    let values = legendre_all(n, t);
    let p = values[n];
    let prev = if n > 0 { values[n - 1] } else { 0.0 };
    let d = n as f64 * (t * p - prev) / (t * t - 1.0);
    (p, d)
}

/// `P_0(t), ..., P_n(t)`.
fn legendre_all(n: usize, t: f64) -> Vec<f64> {
    let mut p = Vec::with_capacity(n + 2);
    p.push(1.0);
    if n >= 1 {
        p.push(t);
    }
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * t * p[k] - kf * p[k - 1]) / (kf + 1.0);
        p.push(next);
    }
    p
}

/// Matrix `S` with `int_{-1}^{t_i} f ≈ sum_j S[i][j] f(t_j)` on the
/// Gauss–Legendre nodes: exact for polynomials of degree below `order`.
pub fn cumulative_matrix(order: usize) -> Vec<Vec<f64>> {
    let (nodes, weights) = gauss_legendre(order);
    let at_nodes: Vec<Vec<f64>> = nodes.iter().map(|&t| legendre_all(order, t)).collect();
    // int_{-1}^{t} P_0 = t + 1, int_{-1}^{t} P_m = (P_{m+1} - P_{m-1}) / (2m + 1)
    let antiderivative = |i: usize, m: usize| -> f64 {
        let p = &at_nodes[i];
        if m == 0 {
            nodes[i] + 1.0
        } else {
            (p[m + 1] - p[m - 1]) / (2 * m + 1) as f64
        }
    };
    (0..order)
        .map(|i| {
            (0..order)
                .map(|j| {
                    (0..order)
                        .map(|m| {
                            let coeff = (2 * m + 1) as f64 / 2.0 * weights[j] * at_nodes[j][m];
                            coeff * antiderivative(i, m)
                        })
                        .sum()
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two_and_integrate_polynomials() {
        for order in [1, 2, 5, 8, 12, 20] {
            let (x, w) = gauss_legendre(order);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
            assert!(x.windows(2).all(|p| p[0] < p[1]));
            let deg = 2 * order - 1;
            let exact = if deg % 2 == 0 {
                2.0 / (deg + 1) as f64
            } else {
                0.0
            };
            let q: f64 = x.iter().zip(&w).map(|(t, w)| w * t.powi(deg as i32)).sum();
            assert!((q - exact).abs() < 1e-13, "order {order}");
            let even = 2 * order - 2;
            let q: f64 = x.iter().zip(&w).map(|(t, w)| w * t.powi(even as i32)).sum();
            assert!((q - 2.0 / (even + 1) as f64).abs() < 1e-13);
        }
    }

    #[test]
    fn cumulative_matrix_integrates_polynomials() {
        let order = 10;
        let (x, _) = gauss_legendre(order);
        let s = cumulative_matrix(order);
        for deg in 0..order {
            for (i, &t) in x.iter().enumerate() {
                let approx: f64 = (0..order).map(|j| s[i][j] * x[j].powi(deg as i32)).sum();
                let d = deg as i32 + 1;
                let exact = (t.powi(d) - (-1.0f64).powi(d)) / d as f64;
                assert!((approx - exact).abs() < 1e-13);
            }
        }
    }
}
