//! Two particles on a uniform sinc mesh (discrete variable representation).
//!
//! The wavefunction is the matrix `Psi_ij = Psi(q_i, q_j)`. With the
//! one-dimensional kinetic matrix `T` the Hamiltonian acts as
//!
//! ```text
//! H Psi = T Psi + Psi T + V ∘ Psi,
//! V_ij  = (q_i^2 + q_j^2)/2 + kb/dx [i = c] + kb/dx [j = c] + gb/dx [i = j],
//! ```
//!
//! where `c` is the `x = 0` node and `kb`, `gb` are the mesh couplings (see
//! [`ContactScheme`]). The full `N^2 x N^2` matrix is never formed.
//!
//! The bosonic ground state is symmetric under particle exchange and under
//! reflection `(x1, x2) -> (-x1, -x2)`; the solver iterates inside that
//! sector and runs a second solve in the reflection-odd bosonic sector to
//! measure the gap to the parity partner.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use thiserror::Error;

use crate::grid::Grid;
use crate::lanczos::{self, Settings};

/// Parity-partner gap below which the ground state is flagged degenerate.
pub const NEAR_DEGENERACY_GAP: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DvrError {
    #[error("vector has length {got}, expected {expected}")]
    Dimension { got: usize, expected: usize },
    #[error("barrier strength must be finite and non-negative, got {0}")]
    InvalidKappa(f64),
    #[error("coupling g1d must be finite and non-negative, got {0}")]
    InvalidCoupling(f64),
    #[error("eigensolver did not converge after {matvecs} operator applications (residual {residual:e})")]
    NonConvergence { matvecs: usize, residual: f64 },
}

/// How a contact strength is placed on the mesh.
///
/// A delta function at a node contributes `strength / dx` to that diagonal
/// entry. Used with the physical strength (`Bare`), the mesh delta acts
/// too strongly: the band-limited sinc basis cannot form the cusp of the
/// wavefunction, so it pays for the barrier instead of bending around it.
/// The error is first order in `dx` and grows with the strength. `CutoffRenormalized` replaces the strength by the value that
/// reproduces the continuum scattering of a sinc basis truncated at
/// `|k| = pi/dx`:
///
/// ```text
/// barrier:  kb = kappa / (1 + 2 kappa dx / pi^2)
/// contact:  gb = g1d   / (1 + g1d   dx / pi^2)
/// ```
///
/// (the interaction acts on the relative coordinate `(x1 - x2)/sqrt(2)`,
/// which changes both the effective strength and the node spacing, hence the
/// different factor).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ContactScheme {
    Bare,
    #[default]
    CutoffRenormalized,
}

impl ContactScheme {
    pub fn barrier(&self, kappa: f64, dx: f64) -> f64 {
        match self {
            Self::Bare => kappa,
            Self::CutoffRenormalized => kappa / (1.0 + 2.0 * kappa * dx / (PI * PI)),
        }
    }

    pub fn contact(&self, g1d: f64, dx: f64) -> f64 {
        match self {
            Self::Bare => g1d,
            Self::CutoffRenormalized => g1d / (1.0 + g1d * dx / (PI * PI)),
        }
    }
}

/// Sinc-mesh kinetic matrix for `-1/2 d^2/dx^2`.
pub fn kinetic_matrix(grid: &Grid) -> DMatrix<f64> {
    let n = grid.n_points();
    let h2 = grid.spacing() * grid.spacing();
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            PI * PI / (6.0 * h2)
        } else {
            let d = i as f64 - j as f64;
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            sign / (d * d * h2)
        }
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    grid: Grid,
    kappa: f64,
    g1d: f64,
    scheme: ContactScheme,
    kinetic: DMatrix<f64>,
    potential: DMatrix<f64>,
}

impl Hamiltonian {
    pub fn new(grid: &Grid, kappa: f64, g1d: f64, scheme: ContactScheme) -> Result<Self, DvrError> {
        if !(kappa.is_finite() && kappa >= 0.0) {
            return Err(DvrError::InvalidKappa(kappa));
        }
        if !(g1d.is_finite() && g1d >= 0.0) {
            return Err(DvrError::InvalidCoupling(g1d));
        }
        let dx = grid.spacing();
        let q = grid.points();
        let c = grid.center();
        let barrier = scheme.barrier(kappa, dx) / dx;
        let contact = scheme.contact(g1d, dx) / dx;
        let potential = DMatrix::from_fn(q.len(), q.len(), |i, j| {
            let mut v = 0.5 * (q[i] * q[i] + q[j] * q[j]);
            if i == c {
                v += barrier;
            }
            if j == c {
                v += barrier;
            }
            if i == j {
                v += contact;
            }
            v
        });
        Ok(Self {
            grid: *grid,
            kappa,
            g1d,
            scheme,
            kinetic: kinetic_matrix(grid),
            potential,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn g1d(&self) -> f64 {
        self.g1d
    }

    pub fn scheme(&self) -> ContactScheme {
        self.scheme
    }

    /// `H Psi` for a wavefunction matrix.
    pub fn apply_matrix(&self, psi: &DMatrix<f64>) -> DMatrix<f64> {
        let mut out = &self.kinetic * psi;
        out.gemm(1.0, psi, &self.kinetic, 1.0);
        out += self.potential.component_mul(psi);
        out
    }

    /// `H v` for a flattened wavefunction, `v[i * N + j] = Psi_ij`.
    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>, DvrError> {
        let n = self.grid.n_points();
        if v.len() != n * n {
            return Err(DvrError::Dimension {
                got: v.len(),
                expected: n * n,
            });
        }
        let psi = DMatrix::from_row_slice(n, n, v);
        let out = self.apply_matrix(&psi);
        Ok(out.transpose().as_slice().to_vec())
    }
}

/// `H v` with the default contact scheme.
pub fn apply_hamiltonian(
    v: &[f64],
    grid: &Grid,
    kappa: f64,
    g1d: f64,
) -> Result<Vec<f64>, DvrError> {
    Hamiltonian::new(grid, kappa, g1d, ContactScheme::default())?.apply(v)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub scheme: ContactScheme,
    /// Relative residual target `||H x - E x|| / max(1, |E|)`.
    pub tolerance: f64,
    pub krylov_dim: usize,
    pub max_restarts: usize,
    /// Also solve the reflection-odd sector to measure the parity gap.
    pub parity_gap: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            scheme: ContactScheme::default(),
            tolerance: 1e-9,
            krylov_dim: 60,
            max_restarts: 300,
            parity_gap: true,
        }
    }
}

/// Lowest bosonic eigenstate on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoBodyState {
    pub energy: f64,
    /// `Psi_ij`, normalized to `sum Psi^2 dx^2 = 1`, positive at its peak.
    pub amplitudes: DMatrix<f64>,
    pub grid: Grid,
    pub kappa: f64,
    pub g1d: f64,
    /// Energy gap to the lowest reflection-odd bosonic state, if computed.
    pub parity_gap: Option<f64>,
    pub near_degenerate: bool,
    pub matvecs: usize,
}

#[derive(Clone, Copy)]
enum Reflection {
    Even,
    Odd,
}

fn project(v: &DMatrix<f64>, reflection: Reflection) -> DMatrix<f64> {
    let n = v.nrows();
    let sign = match reflection {
        Reflection::Even => 1.0,
        Reflection::Odd => -1.0,
    };
    DMatrix::from_fn(n, n, |i, j| {
        let (ri, rj) = (n - 1 - i, n - 1 - j);
        0.25 * (v[(i, j)] + v[(j, i)] + sign * (v[(ri, rj)] + v[(rj, ri)]))
    })
}

fn start_vector(grid: &Grid, reflection: Reflection) -> DMatrix<f64> {
    let q = grid.points();
    let n = q.len();
    DMatrix::from_fn(n, n, |i, j| {
        let (x, y) = (q[i], q[j]);
        let envelope = (-0.5 * (x * x + y * y)).exp();
        // a little structure so no eigenvector of the sector is missed
        let ripple = 1.0 + 0.1 * (1.3 * x + 0.7 * y).cos() + 0.05 * (x * y).sin();
        match reflection {
            Reflection::Even => envelope * ripple,
            Reflection::Odd => (x + y + 0.1 * x * x * x) * envelope * ripple,
        }
    })
}

fn lowest_in_sector(
    h: &Hamiltonian,
    reflection: Reflection,
    options: &SolverOptions,
) -> Result<lanczos::Eigenpair, DvrError> {
    let settings = Settings {
        krylov_dim: options.krylov_dim,
        max_restarts: options.max_restarts,
        tolerance: options.tolerance,
    };
    lanczos::lowest_eigenpair(
        |v| h.apply_matrix(v),
        |v| project(v, reflection),
        &start_vector(h.grid(), reflection),
        settings,
    )
    .map_err(|f| DvrError::NonConvergence {
        matvecs: f.matvecs,
        residual: f.residual,
    })
}

/// Ground state with the default contact scheme and solver settings.
pub fn ground_state(grid: &Grid, kappa: f64, g1d: f64) -> Result<TwoBodyState, DvrError> {
    ground_state_with(grid, kappa, g1d, &SolverOptions::default())
}

pub fn ground_state_with(
    grid: &Grid,
    kappa: f64,
    g1d: f64,
    options: &SolverOptions,
) -> Result<TwoBodyState, DvrError> {
    let h = Hamiltonian::new(grid, kappa, g1d, options.scheme)?;
    let pair = lowest_in_sector(&h, Reflection::Even, options)?;
    let mut matvecs = pair.matvecs;
    let parity_gap = if options.parity_gap {
        let partner = lowest_in_sector(&h, Reflection::Odd, options)?;
        matvecs += partner.matvecs;
        Some(partner.value - pair.value)
    } else {
        None
    };
    let near_degenerate = parity_gap.is_some_and(|gap| gap < NEAR_DEGENERACY_GAP);
    if near_degenerate {
        log::warn!("ground state at kappa = {kappa}, g1d = {g1d} is nearly degenerate with its parity partner");
    }
    let mut amplitudes = project(&pair.vector, Reflection::Even);
    let peak = amplitudes
        .iter()
        .copied()
        .fold(0.0, |m: f64, v| if v.abs() > m.abs() { v } else { m });
    let norm = amplitudes.norm() * grid.spacing();
    amplitudes *= peak.signum() / norm;
    Ok(TwoBodyState {
        energy: pair.value,
        amplitudes,
        grid: *grid,
        kappa,
        g1d,
        parity_gap,
        near_degenerate,
        matvecs,
    })
}
