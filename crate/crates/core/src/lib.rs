//! Two bosons in a harmonic trap split by a central point barrier.
//!
//! Units: lengths in the oscillator length `d = sqrt(hbar / m omega)`,
//! energies in `hbar omega`, barrier strength `kappa` and contact coupling
//! `g1d` in `hbar omega d`.
//!
//! Two routes lead to the same observables:
//!
//! * analytic — [`single_particle`] levels and the [`tonks`] (infinite
//!   contact repulsion) pair built from them;
//! * numerical — the [`dvr`] grid Hamiltonian for any finite `kappa`, `g1d`.
//!
//! Both feed [`analysis`], which turns a density matrix into natural
//! orbitals, a momentum distribution, the von Neumann entropy, and the
//! Schmidt number.

pub mod analysis;
pub mod dvr;
pub mod grid;
mod lanczos;
pub mod quadrature;
pub mod single_particle;
pub mod specfun;
pub mod tonks;

pub use analysis::{
    momentum_distribution, natural_orbitals, rspd_from_state, schmidt_number, von_neumann_entropy,
    AnalysisError, DensityMatrix, MomentumDistribution, NaturalDecomposition,
};
pub use dvr::{
    apply_hamiltonian, ground_state, ContactScheme, DvrError, Hamiltonian, SolverOptions,
    TwoBodyState,
};
pub use grid::{build_grid, Grid, GridError, Mesh};
pub use single_particle::{
    eigenfunction, even_energy, odd_energy, spectrum, BarrierStrength, EigenState, Parity,
    SingleParticleError,
};
pub use tonks::{TonksError, TonksState};
