use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use splittrap::dvr::{ground_state_with, SolverOptions};
use splittrap::tonks::TonksState;
use splittrap::{apply_hamiltonian, build_grid, even_energy, ground_state, BarrierStrength, Grid};

fn standard_grid() -> Grid {
    build_grid(81, 0.16).unwrap()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn quick() -> SolverOptions {
    SolverOptions {
        parity_gap: false,
        ..Default::default()
    }
}

#[test]
fn hamiltonian_is_linear_and_symmetric() {
    let grid = build_grid(41, 0.2).unwrap();
    let n = grid.n_points() * grid.n_points();
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    for (kappa, g) in [(0.0, 0.0), (1.0, 5.0), (10.0, 500.0)] {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let w: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let hv = apply_hamiltonian(&v, &grid, kappa, g).unwrap();
        let hw = apply_hamiltonian(&w, &grid, kappa, g).unwrap();
        let lhs = dot(&w, &hv);
        let rhs = dot(&hw, &v);
        assert!(
            (lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1.0),
            "{lhs} vs {rhs}"
        );
        let (alpha, beta) = (0.3, -1.7);
        let combo: Vec<f64> = v
            .iter()
            .zip(&w)
            .map(|(a, b)| alpha * a + beta * b)
            .collect();
        let h_combo = apply_hamiltonian(&combo, &grid, kappa, g).unwrap();
        for i in 0..n {
            let want = alpha * hv[i] + beta * hw[i];
            assert!((h_combo[i] - want).abs() <= 1e-12 * (1.0 + want.abs()));
        }
    }
}

#[test]
fn non_interacting_pair_is_a_product_state() {
    let grid = standard_grid();
    for kappa in [0.0, 1.0, 2.0, 10.0] {
        let s = ground_state(&grid, kappa, 0.0).unwrap();
        let single = even_energy(BarrierStrength::finite(kappa).unwrap(), 0).unwrap();
        assert!(
            (s.energy - 2.0 * single).abs() <= 2e-3,
            "kappa {kappa}: {} vs {}",
            s.energy,
            2.0 * single
        );
        let sv = s.amplitudes.clone().singular_values();
        let mut sv: Vec<f64> = sv.iter().copied().collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        assert!(
            sv[1] / sv[0] <= 1e-6,
            "kappa {kappa}: ratio {}",
            sv[1] / sv[0]
        );
    }
}

#[test]
fn separation_oracle_at_zero_barrier() {
    let grid = standard_grid();
    for g in [0.5, 1.0, 5.0, 20.0, 500.0] {
        let s = ground_state_with(&grid, 0.0, g, &quick()).unwrap();
        let relative = even_energy(BarrierStrength::finite(g / 2f64.sqrt()).unwrap(), 0).unwrap();
        assert!((s.energy - 0.5 - relative).abs() <= 5e-3, "g {g}");
    }
}

#[test]
fn energy_is_monotone_and_below_the_tonks_ceiling() {
    let grid = standard_grid();
    let values = [0.0, 1.0, 2.0, 5.0, 10.0];
    let mut table = vec![vec![0.0; values.len()]; values.len()];
    for (a, &kappa) in values.iter().enumerate() {
        for (b, &g) in values.iter().enumerate() {
            table[a][b] = ground_state_with(&grid, kappa, g, &quick()).unwrap().energy;
        }
        let ceiling = TonksState::new(BarrierStrength::finite(kappa).unwrap())
            .unwrap()
            .pair_energy;
        assert!(table[a].iter().all(|&e| e <= ceiling + 1e-3));
        assert!(table[a].iter().all(|&e| e >= table[a][0] - 1e-12));
    }
    for a in 0..values.len() {
        for b in 1..values.len() {
            assert!(
                table[a][b] >= table[a][b - 1],
                "g not monotone at kappa {}",
                values[a]
            );
            assert!(
                table[b][a] >= table[b - 1][a],
                "kappa not monotone at g {}",
                values[a]
            );
        }
    }
}

#[test]
fn energy_converges_on_refinement() {
    let coarse = ground_state_with(&standard_grid(), 1.0, 1.0, &quick()).unwrap();
    let fine = ground_state_with(&build_grid(161, 0.08).unwrap(), 1.0, 1.0, &quick()).unwrap();
    assert!((coarse.energy - fine.energy).abs() < 1e-3);
}

#[test]
fn strong_contact_empties_the_diagonal() {
    for kappa in [0.0, 5.0] {
        let s = ground_state_with(&standard_grid(), kappa, 500.0, &quick()).unwrap();
        let psi = &s.amplitudes;
        let diag = (0..psi.nrows())
            .map(|i| psi[(i, i)].abs())
            .fold(0.0, f64::max);
        assert!(
            diag <= 0.05 * psi.amax(),
            "kappa {kappa}: ratio {}",
            diag / psi.amax()
        );
    }
}

#[test]
fn reference_energies() {
    let grid = standard_grid();
    let e = |k, g| ground_state_with(&grid, k, g, &quick()).unwrap().energy;
    assert!((e(0.0, 0.0) - 1.0).abs() <= 1e-3);
    assert!((e(0.0, 500.0) - 2.0).abs() <= 0.02);
    assert!((e(10.0, 500.0) - 2.9).abs() <= 0.05);
}

#[test]
fn parity_gap_shrinks_with_the_barrier() {
    let grid = standard_grid();
    let gaps: Vec<f64> = [0.0, 2.0, 10.0, 50.0]
        .iter()
        .map(|&k| ground_state(&grid, k, 0.0).unwrap().parity_gap.unwrap())
        .collect();
    assert!(gaps.windows(2).all(|p| p[1] < p[0]), "{gaps:?}");
    assert!(gaps.iter().all(|&g| g > 1e-6));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn ground_state_invariants(kappa in 0.0f64..12.0, g in 0.0f64..30.0) {
        let grid = build_grid(41, 0.25).unwrap();
        let s = ground_state(&grid, kappa, g).unwrap();
        let psi = &s.amplitudes;
        let norm: f64 = psi.iter().map(|a| a * a).sum::<f64>() * grid.spacing().powi(2);
        prop_assert!((norm - 1.0).abs() <= 1e-10);
        prop_assert!((psi - psi.transpose()).amax() <= 1e-8);
        prop_assert!(psi.max() > 0.0 && psi.max() >= -psi.min());
        let free = ground_state_with(&grid, kappa, 0.0, &quick()).unwrap();
        prop_assert!(s.energy >= free.energy - 1e-9);
        prop_assert!(!s.near_degenerate);
    }
}
