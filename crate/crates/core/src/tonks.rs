//! The two-boson ground state with infinitely strong contact repulsion,
//! `Psi(x1, x2) = |phi0(x1) phi1(x2) - phi0(x2) phi1(x1)| / sqrt(2)`,
//! built from the two lowest single-particle levels.
//!
//! Its reduced density has a closed form in terms of running overlap
//! integrals. With `C_ab(x, x') = int_{min}^{max} phi_a phi_b`,
//!
//! ```text
//! rho(x, x') = [phi0 phi0' + phi1 phi1'] / 2
//!            - [phi0 phi0' C11 - (phi0 phi1' + phi1 phi0') C01 + phi1 phi1' C00],
//! ```
//!
//! because the determinant changes sign only on the diagonal. On a Gauss
//! panel mesh this needs just the orbital values at the nodes and
//! reaches spectral accuracy away from the diagonal kink, which is what the
//! entropy and Schmidt-number work relies on. [`tonks_rspd`] instead
//! integrates `Psi Psi` directly with the trapezoid rule on a uniform grid,
//! for side-by-side comparison with DVR results.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use thiserror::Error;

use crate::analysis::{AnalysisError, DensityMatrix};
use crate::grid::{Grid, GridError, Mesh};
use crate::single_particle::{BarrierStrength, EigenState, SingleParticleError};
use crate::specfun::kummer_m;

/// Uniform grids for [`tonks_rspd`] must reach at least this far.
pub const MIN_HALF_SPAN: f64 = 6.0;
/// Largest tolerated deviation of the raw trapezoid trace from 1.
pub const TRACE_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TonksError {
    #[error(transparent)]
    SingleParticle(#[from] SingleParticleError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("grid reaches only |x| = {0}, needs at least {MIN_HALF_SPAN}")]
    GridTooNarrow(f64),
    #[error("grid too coarse: quadrature trace of the density is {0}")]
    GridTooCoarse(f64),
    #[error("the closed-form density needs a Gauss panel mesh")]
    NotPanelMesh,
}

/// Default uniform grid for the trapezoid density: 161 points, spacing 0.08.
pub fn default_grid() -> Grid {
    Grid::new(161, 0.08).expect("valid default grid")
}

/// Default mesh for the closed-form density: `[-7, 7]`, panels of 0.5,
/// 12 Gauss points each.
pub fn default_mesh() -> Mesh {
    Mesh::gauss_panels(7.0, 0.5, 12).expect("valid default mesh")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TonksState {
    pub kappa: BarrierStrength,
    pub pair_energy: f64,
    pub lower: EigenState,
    pub upper: EigenState,
}

impl TonksState {
    pub fn new(kappa: BarrierStrength) -> Result<Self, TonksError> {
        let lower = EigenState::even(kappa, 0)?;
        let upper = EigenState::odd(kappa, 1)?;
        Ok(Self {
            kappa,
            pair_energy: lower.energy + upper.energy,
            lower,
            upper,
        })
    }

    pub fn wavefunction(&self, x1: f64, x2: f64) -> f64 {
        let d =
            self.lower.eval(x1) * self.upper.eval(x2) - self.lower.eval(x2) * self.upper.eval(x1);
        d.abs() / std::f64::consts::SQRT_2
    }

    fn orbitals(&self, nodes: &[f64]) -> (Vec<f64>, Vec<f64>) {
        (
            nodes.iter().map(|&x| self.lower.eval(x)).collect(),
            nodes.iter().map(|&x| self.upper.eval(x)).collect(),
        )
    }

    /// Trapezoid-rule density on a uniform grid, rescaled to unit trace.
    pub fn rspd(&self, grid: &Grid) -> Result<DensityMatrix, TonksError> {
        if grid.half_span() < MIN_HALF_SPAN - 1e-12 {
            return Err(TonksError::GridTooNarrow(grid.half_span()));
        }
        let (a, b) = self.orbitals(&grid.points());
        let n = grid.n_points();
        let dx = grid.spacing();
        let psi = DMatrix::from_fn(n, n, |i, k| {
            (a[i] * b[k] - a[k] * b[i]).abs() / std::f64::consts::SQRT_2
        });
        let mut weighted = psi.clone();
        for k in [0, n - 1] {
            weighted.column_mut(k).scale_mut(0.5);
        }
        let values = (&weighted * psi.transpose()) * dx;
        let trace: f64 = (0..n).map(|i| values[(i, i)]).sum::<f64>() * dx;
        if (trace - 1.0).abs() > TRACE_TOLERANCE {
            return Err(TonksError::GridTooCoarse(trace));
        }
        // the trapezoid weights make the product non-symmetric only at round-off
        let sym = (&values + values.transpose()) * (0.5 / trace);
        Ok(DensityMatrix::new(sym, Mesh::from(grid))?)
    }

    /// Closed-form density on a Gauss panel mesh.
    pub fn rspd_on_mesh(&self, mesh: &Mesh) -> Result<DensityMatrix, TonksError> {
        let (a, b) = self.orbitals(mesh.nodes());
        let square =
            |u: &[f64], v: &[f64]| -> Vec<f64> { u.iter().zip(v).map(|(p, q)| p * q).collect() };
        let cum = |f: Vec<f64>| mesh.cumulative_integral(&f).ok_or(TonksError::NotPanelMesh);
        let c00 = cum(square(&a, &a))?;
        let c11 = cum(square(&b, &b))?;
        let c01 = cum(square(&a, &b))?;
        let n = mesh.len();
        let values = DMatrix::from_fn(n, n, |i, j| {
            let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
            let s00 = c00[hi] - c00[lo];
            let s11 = c11[hi] - c11[lo];
            let s01 = c01[hi] - c01[lo];
            0.5 * (a[i] * a[j] + b[i] * b[j])
                - (a[i] * a[j] * s11 - (a[i] * b[j] + b[i] * a[j]) * s01 + b[i] * b[j] * s00)
        });
        Ok(DensityMatrix::new(values, mesh.clone())?)
    }
}

/// `Psi(x1, x2)` for barrier strength `kappa`.
pub fn tonks_wavefunction(kappa: BarrierStrength, x1: f64, x2: f64) -> Result<f64, TonksError> {
    Ok(TonksState::new(kappa)?.wavefunction(x1, x2))
}

/// Trapezoid-rule density on a uniform grid.
pub fn tonks_rspd(kappa: BarrierStrength, grid: &Grid) -> Result<DensityMatrix, TonksError> {
    TonksState::new(kappa)?.rspd(grid)
}

/// Closed-form density on [`default_mesh`].
pub fn tonks_rspd_accurate(kappa: BarrierStrength) -> Result<DensityMatrix, TonksError> {
    TonksState::new(kappa)?.rspd_on_mesh(&default_mesh())
}

/// `1 - k^2 e^{-k^2/2} M(1/2, 3/2, k^2/2)`: the overlap structure shared by
/// both impenetrable-barrier momentum profiles.
fn barrier_bracket(k: f64) -> f64 {
    let z = 0.5 * k * k;
    if z <= 50.0 {
        bracket_series(z)
    } else {
        bracket_asymptotic(z)
    }
}

fn bracket_series(z: f64) -> f64 {
    1.0 - 2.0 * z * (-z).exp() * kummer_m(0.5, 1.5, z).expect("b = 3/2 is valid")
}

/// `e^{-z} M(1/2, 3/2, z) ~ (2z)^{-1} sum_n (1/2)_n z^{-n}`; the `n = 0` term
/// cancels the leading 1.
fn bracket_asymptotic(z: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 0.0;
    for n in 0..60 {
        let next = term * (0.5 + n as f64) / z;
        if next.abs() > term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    -sum
}

/// Momentum distribution of the infinite-contact pair behind an
/// impenetrable barrier:
/// `(2 / pi^{3/2}) { B(k)^2 + (pi/2) k^2 e^{-k^2} }`.
pub fn momentum_tg_infinite_barrier(k: f64) -> f64 {
    let b = barrier_bracket(k);
    2.0 / PI.powf(1.5) * (b * b + 0.5 * PI * k * k * (-k * k).exp())
}

/// Momentum distribution of a non-interacting pair behind an impenetrable
/// barrier: `(4 / pi^{3/2}) B(k)^2`.
pub fn momentum_noninteracting_infinite_barrier(k: f64) -> f64 {
    let b = barrier_bracket(k);
    4.0 / PI.powf(1.5) * b * b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{natural_orbitals, von_neumann_entropy};

    fn fin(k: f64) -> BarrierStrength {
        BarrierStrength::finite(k).unwrap()
    }

    #[test]
    fn pair_energies() {
        assert_eq!(TonksState::new(fin(0.0)).unwrap().pair_energy, 2.0);
        assert_eq!(
            TonksState::new(BarrierStrength::Infinite)
                .unwrap()
                .pair_energy,
            3.0
        );
        assert!((TonksState::new(fin(1.0)).unwrap().pair_energy - 2.4).abs() <= 0.05);
        assert!((TonksState::new(fin(2.0)).unwrap().pair_energy - 2.6).abs() <= 0.05);
    }

    #[test]
    fn wavefunction_node_and_symmetry() {
        for k in [fin(0.0), fin(1.7), BarrierStrength::Infinite] {
            let s = TonksState::new(k).unwrap();
            for (x, y) in [(0.3, -1.2), (2.0, 0.1), (-0.5, -0.4)] {
                assert_eq!(s.wavefunction(x, x), 0.0);
                assert_eq!(s.wavefunction(x, y), s.wavefunction(y, x));
                assert!(s.wavefunction(x, y) >= 0.0);
            }
        }
    }

    #[test]
    fn momentum_closed_form_values() {
        assert!((momentum_tg_infinite_barrier(0.0) - 2.0 / PI.powf(1.5)).abs() < 1e-15);
        assert!((momentum_noninteracting_infinite_barrier(0.0) - 4.0 / PI.powf(1.5)).abs() < 1e-15);
        for k in [0.3, 1.7, 4.2, 9.0] {
            assert_eq!(
                momentum_tg_infinite_barrier(k),
                momentum_tg_infinite_barrier(-k)
            );
            assert_eq!(
                momentum_noninteracting_infinite_barrier(k),
                momentum_noninteracting_infinite_barrier(-k)
            );
        }
    }

    #[test]
    fn bracket_branches_join_smoothly() {
        for z in [30.0, 50.0, 70.0] {
            let (a, b) = (bracket_series(z), bracket_asymptotic(z));
            assert!((a - b).abs() < 1e-10 * b.abs(), "z = {z}: {a} vs {b}");
        }
        // leading tail behaviour B ~ -1/k^2
        let k = 30.0;
        assert!((barrier_bracket(k) * k * k + 1.0).abs() < 1e-2);
    }

    /// `int Psi(x, y) Psi(x', y) dy` with Gauss panels broken at the kinks
    /// `y = 0, x, x'`.
    fn brute_force_rho(s: &TonksState, x: f64, xp: f64) -> f64 {
        let mut cuts = [-9.0, 0.0, x, xp, 9.0];
        cuts.sort_by(f64::total_cmp);
        let (t, w) = crate::quadrature::gauss_legendre(40);
        let mut total = 0.0;
        for pair in cuts.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if b - a < 1e-14 {
                continue;
            }
            for (ti, wi) in t.iter().zip(&w) {
                let y = a + 0.5 * (b - a) * (ti + 1.0);
                total += 0.5 * (b - a) * wi * s.wavefunction(x, y) * s.wavefunction(xp, y);
            }
        }
        total
    }

    #[test]
    fn closed_form_density_matches_direct_integration() {
        let mesh = default_mesh();
        let x = mesh.nodes();
        for k in [fin(0.0), fin(1.33), fin(10.0), BarrierStrength::Infinite] {
            let s = TonksState::new(k).unwrap();
            let rho = s.rspd_on_mesh(&mesh).unwrap();
            for (i, j) in [
                (100, 100),
                (100, 200),
                (150, 180),
                (168, 168),
                (20, 300),
                (200, 250),
            ] {
                let want = brute_force_rho(&s, x[i], x[j]);
                let got = rho.values()[(i, j)];
                assert!(
                    (got - want).abs() < 1e-12,
                    "kappa {k}: rho({}, {}) = {got} vs {want}",
                    x[i],
                    x[j]
                );
            }
        }
    }

    #[test]
    fn zero_barrier_density_keeps_the_fermionic_diagonal_only() {
        // same density as the fermion pair, but not the same off-diagonal
        // coherence: the modulus removes part of it
        let mesh = default_mesh();
        let rho = TonksState::new(fin(0.0))
            .unwrap()
            .rspd_on_mesh(&mesh)
            .unwrap();
        let x = mesh.nodes();
        let phi0 = |x: f64| PI.powf(-0.25) * (-0.5 * x * x).exp();
        let phi1 = |x: f64| PI.powf(-0.25) * 2f64.sqrt() * x * (-0.5 * x * x).exp();
        let fermionic = |a: f64, b: f64| 0.5 * (phi0(a) * phi0(b) + phi1(a) * phi1(b));
        for (i, &xi) in x.iter().enumerate() {
            assert!((rho.values()[(i, i)] - fermionic(xi, xi)).abs() < 1e-12);
        }
        let (i, j) = (150, 180);
        assert!((rho.values()[(i, j)] - fermionic(x[i], x[j])).abs() > 0.05);
        let s = von_neumann_entropy(&natural_orbitals(&rho));
        assert!((s - 0.985).abs() < 0.005, "{s}");
    }

    #[test]
    fn impenetrable_barrier_decouples_the_halves() {
        let rho = tonks_rspd(BarrierStrength::Infinite, &default_grid()).unwrap();
        assert_eq!(rho.cross_barrier_mass(), 0.0);
        let rho = tonks_rspd_accurate(BarrierStrength::Infinite).unwrap();
        assert!(rho.cross_barrier_mass() < 1e-14);
    }

    #[test]
    fn closed_form_and_trapezoid_routes_agree() {
        let grid = default_grid();
        let s = TonksState::new(fin(2.0)).unwrap();
        let trap = natural_orbitals(&s.rspd(&grid).unwrap());
        let exact = natural_orbitals(&s.rspd_on_mesh(&default_mesh()).unwrap());
        let (a, b) = (von_neumann_entropy(&trap), von_neumann_entropy(&exact));
        assert!((a - b).abs() < 0.05, "{a} vs {b}");
    }

    #[test]
    fn trapezoid_density_rejects_narrow_or_coarse_grids() {
        let s = TonksState::new(fin(1.0)).unwrap();
        assert!(matches!(
            s.rspd(&Grid::new(61, 0.16).unwrap()),
            Err(TonksError::GridTooNarrow(_))
        ));
        assert!(matches!(
            s.rspd(&Grid::new(25, 0.5).unwrap()),
            Err(TonksError::GridTooCoarse(_))
        ));
        let grid = Grid::new(81, 0.16).unwrap();
        assert!(matches!(
            s.rspd_on_mesh(&Mesh::from(&grid)),
            Err(TonksError::NotPanelMesh)
        ));
    }
}
