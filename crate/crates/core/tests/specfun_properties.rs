use std::f64::consts::PI;

use proptest::prelude::*;
use splittrap::quadrature::gauss_legendre;
use splittrap::specfun::{gamma, hermite, kummer_m, kummer_u};

/// `M(1/2, 3/2, z) = int_0^1 e^{z u^2} du`, by composite Gauss–Legendre.
fn m_half_three_halves(z: f64) -> f64 {
    let (t, w) = gauss_legendre(30);
    let panels = 20;
    let h = 1.0 / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let a = p as f64 * h;
        for (ti, wi) in t.iter().zip(&w) {
            let u = a + 0.5 * h * (ti + 1.0);
            total += 0.5 * h * wi * (z * u * u).exp();
        }
    }
    total
}

proptest! {
    #[test]
    fn hermite_recurrence(n in 1usize..50, x in -10.0f64..10.0) {
        let lhs = hermite(n + 1, x);
        let rhs = 2.0 * x * hermite(n, x) - 2.0 * n as f64 * hermite(n - 1, x);
        let scale = lhs.abs().max((2.0 * x * hermite(n, x)).abs()).max(1e-300);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * scale);
    }

    #[test]
    fn gamma_reflection(x in 1e-6f64..(1.0 - 1e-6)) {
        let lhs = gamma(x).unwrap() * gamma(1.0 - x).unwrap() * (PI * x).sin();
        prop_assert!((lhs - PI).abs() <= 1e-10 * PI);
    }

    #[test]
    fn gamma_recurrence(x in -20.0f64..40.0) {
        prop_assume!((x - x.round()).abs() > 1e-6);
        let lhs = gamma(x + 1.0).unwrap();
        let rhs = x * gamma(x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs());
    }

    #[test]
    fn kummer_transform(z in 0.0f64..20.0) {
        let oracle = m_half_three_halves(z);
        let direct = kummer_m(0.5, 1.5, z).unwrap();
        let transformed = z.exp() * kummer_m(1.0, 1.5, -z).unwrap();
        prop_assert!((direct - oracle).abs() <= 1e-10 * oracle);
        prop_assert!((transformed - direct).abs() <= 1e-8 * direct);
    }

    #[test]
    fn u_contiguous_relation(a in -9.0f64..0.0, z in 0.05f64..60.0) {
        // U(a-1) - (2a + z - b) U(a) + a (a - b + 1) U(a+1) = 0 at b = 1/2
        let b = 0.5;
        let lower = kummer_u(a - 1.0, b, z).unwrap();
        let mid = kummer_u(a, b, z).unwrap();
        let upper = kummer_u(a + 1.0, b, z).unwrap();
        let t1 = (2.0 * a + z - b) * mid;
        let t2 = a * (a - b + 1.0) * upper;
        let scale = lower.abs().max(t1.abs()).max(t2.abs());
        prop_assert!((lower - t1 + t2).abs() <= 1e-8 * scale, "residual {}", (lower - t1 + t2).abs() / scale);
    }

    #[test]
    fn u_solves_kummers_equation(a in -6.0f64..1.0, z in 0.3f64..55.0) {
        // z U'' + (b - z) U' - a U = 0, by central differences
        let b = 0.5;
        let h = 1e-3 * z.max(1.0);
        let u = |zz: f64| kummer_u(a, b, zz).unwrap();
        let (um, u0, up) = (u(z - h), u(z), u(z + h));
        let d1 = (up - um) / (2.0 * h);
        let d2 = (up - 2.0 * u0 + um) / (h * h);
        let residual = z * d2 + (b - z) * d1 - a * u0;
        let scale = (z * d2).abs().max(((b - z) * d1).abs()).max((a * u0).abs());
        prop_assert!(residual.abs() <= 1e-4 * scale);
    }
}

#[test]
fn large_argument_m_family() {
    for z in [25.0, 50.0, 80.0, 100.0] {
        let oracle = m_half_three_halves(z);
        let got = kummer_m(0.5, 1.5, z).unwrap();
        assert!((got - oracle).abs() <= 1e-10 * oracle, "z = {z}");
    }
}
