//! One particle in the harmonic trap `h = -1/2 d^2/dx^2 + x^2/2 + kappa delta(x)`.
//!
//! Odd levels do not feel the barrier and keep the oscillator energies
//! `n + 1/2`. Even levels solve
//! `-kappa = 2 Gamma(3/4 - E/2) / Gamma(1/4 - E/2)`, with one root in each
//! window `(2j + 1/2, 2j + 3/2)`, and have wavefunctions
//! `e^{-x^2/2} U(1/4 - E/2, 1/2, x^2)`.
//!
//! Even levels are addressed by `j = 0, 1, 2, ...` and reported with the
//! oscillator label `n = 2j`.

use std::f64::consts::PI;

use thiserror::Error;

use crate::grid::Mesh;
use crate::specfun::{gamma, hermite, kummer_u, rgamma, SpecFunError};

/// Distance kept from the Gamma pole at the top of each even-level bracket.
pub const POLE_INSET: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SingleParticleError {
    #[error("barrier strength must be finite and non-negative, got {0}")]
    InvalidKappa(f64),
    #[error("no sign change of the even-level residual on ({lo}, {hi}) for kappa = {kappa}")]
    BracketFailure { kappa: f64, lo: f64, hi: f64 },
    #[error("level {0} is not odd")]
    NotOdd(usize),
    #[error("at least one level must be requested")]
    EmptySpectrum,
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
}

/// Barrier strength in units of `hbar omega d`; the impenetrable barrier is
/// its own variant rather than a float infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BarrierStrength {
    Finite(f64),
    Infinite,
}

impl BarrierStrength {
    pub fn finite(kappa: f64) -> Result<Self, SingleParticleError> {
        if kappa.is_finite() && kappa >= 0.0 {
            Ok(Self::Finite(kappa))
        } else {
            Err(SingleParticleError::InvalidKappa(kappa))
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Self::Infinite)
    }

    /// The finite value, or `None` for the impenetrable barrier.
    pub fn value(&self) -> Option<f64> {
        match self {
            Self::Finite(k) => Some(*k),
            Self::Infinite => None,
        }
    }
}

impl std::fmt::Display for BarrierStrength {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Finite(k) => write!(f, "{k}"),
            Self::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

/// `2 Gamma(3/4 - E/2) / Gamma(1/4 - E/2) + kappa`; positive at the bottom
/// of each even bracket, diverging to `-inf` at its top.
pub fn even_residual(kappa: f64, energy: f64) -> Result<f64, SpecFunError> {
    Ok(2.0 * gamma(0.75 - 0.5 * energy)? * rgamma(0.25 - 0.5 * energy) + kappa)
}

/// Energy of even level `j` (oscillator label `2j`).
pub fn even_energy(kappa: BarrierStrength, j: usize) -> Result<f64, SingleParticleError> {
    let base = 2.0 * j as f64;
    let kappa = match kappa {
        BarrierStrength::Infinite => return Ok(base + 1.5),
        BarrierStrength::Finite(k) if !(k.is_finite() && k >= 0.0) => {
            return Err(SingleParticleError::InvalidKappa(k))
        }
        BarrierStrength::Finite(k) => k,
    };
    if kappa == 0.0 {
        return Ok(base + 0.5);
    }
    let mut lo = base + 0.5;
    let mut hi = base + 1.5 - POLE_INSET;
    let failure = SingleParticleError::BracketFailure { kappa, lo, hi };
    if even_residual(kappa, hi).map_err(|_| failure.clone())? >= 0.0 {
        return Err(failure);
    }
    // bisect down to adjacent floats
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if even_residual(kappa, mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Energy `n + 1/2` of odd level `n`.
pub fn odd_energy(n: usize) -> Result<f64, SingleParticleError> {
    if n.is_multiple_of(2) {
        return Err(SingleParticleError::NotOdd(n));
    }
    Ok(n as f64 + 0.5)
}

/// `1 / sqrt(2^n n! sqrt(pi))`, computed in logs so large `n` cannot overflow.
fn oscillator_norm(n: usize) -> f64 {
    let ln_fact: f64 = (2..=n).map(|k| (k as f64).ln()).sum();
    (-0.5 * (n as f64 * std::f64::consts::LN_2 + ln_fact + 0.5 * PI.ln())).exp()
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Shape {
    /// `e^{-x^2/2} U(a, 1/2, x^2)` with `a = 1/4 - E/2`
    Kummer { a: f64 },
    /// `phi_n(x)`, optionally folded to `sgn(x) phi_n(x)`
    Oscillator { n: usize, folded: bool },
}

/// A single-particle level with its normalized wavefunction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenState {
    pub parity: Parity,
    /// Oscillator label: even levels `0, 2, 4, ...`, odd levels `1, 3, 5, ...`.
    pub index: usize,
    pub energy: f64,
    pub norm_constant: f64,
    pub kappa: BarrierStrength,
    shape: Shape,
}

impl EigenState {
    /// Even level `j`.
    pub fn even(kappa: BarrierStrength, j: usize) -> Result<Self, SingleParticleError> {
        let energy = even_energy(kappa, j)?;
        let index = 2 * j;
        let (shape, norm_constant) = match kappa {
            BarrierStrength::Infinite => (
                Shape::Oscillator {
                    n: index + 1,
                    folded: true,
                },
                oscillator_norm(index + 1),
            ),
            BarrierStrength::Finite(0.0) => (
                Shape::Oscillator {
                    n: index,
                    folded: false,
                },
                oscillator_norm(index),
            ),
            BarrierStrength::Finite(_) => {
                let a = 0.25 - 0.5 * energy;
                (Shape::Kummer { a }, kummer_norm(a, energy)?)
            }
        };
        Ok(Self {
            parity: Parity::Even,
            index,
            energy,
            norm_constant,
            kappa,
            shape,
        })
    }

    /// Odd level `n` (`n` odd).
    pub fn odd(kappa: BarrierStrength, n: usize) -> Result<Self, SingleParticleError> {
        let energy = odd_energy(n)?;
        Ok(Self {
            parity: Parity::Odd,
            index: n,
            energy,
            norm_constant: oscillator_norm(n),
            kappa,
            shape: Shape::Oscillator { n, folded: false },
        })
    }

    /// Normalized amplitude at `x`.
    pub fn eval(&self, x: f64) -> f64 {
        match self.shape {
            Shape::Kummer { a } => {
                // U is only needed at z = x^2 >= 0; the shape is even in x
                let u = kummer_u(a, 0.5, x * x).expect("U(a, 1/2, z) is defined for z >= 0");
                self.norm_constant * (-0.5 * x * x).exp() * u
            }
            Shape::Oscillator { n, folded } => {
                let sign = if folded && x < 0.0 { -1.0 } else { 1.0 };
                sign * self.norm_constant * hermite(n, x) * (-0.5 * x * x).exp()
            }
        }
    }
}

/// Same as [`EigenState::eval`].
pub fn eigenfunction(state: &EigenState, x: f64) -> f64 {
    state.eval(x)
}

/// Normalization of `e^{-x^2/2} U(a, 1/2, x^2)` by panel Gauss–Legendre
/// quadrature over `[0, L]`, doubled by evenness.
fn kummer_norm(a: f64, energy: f64) -> Result<f64, SingleParticleError> {
    let cutoff = f64::max(8.0, (2.0 * energy).sqrt() + 4.0);
    let mesh = Mesh::gauss_panels(cutoff, 0.25, 8).expect("fixed valid panel layout");
    let mut integral = 0.0;
    for (&x, &w) in mesh.nodes().iter().zip(mesh.weights()) {
        if x <= 0.0 {
            continue;
        }
        let f = (-0.5 * x * x).exp() * kummer_u(a, 0.5, x * x)?;
        integral += w * f * f;
    }
    Ok(1.0 / (2.0 * integral).sqrt())
}

/// The lowest `count` levels in energy order; exact ties put the even level
/// first.
pub fn spectrum(
    kappa: BarrierStrength,
    count: usize,
) -> Result<Vec<EigenState>, SingleParticleError> {
    if count == 0 {
        return Err(SingleParticleError::EmptySpectrum);
    }
    // even level j lies below odd level 2j+1 (or ties with it at infinite kappa)
    let mut states = Vec::with_capacity(count);
    let mut j = 0;
    while states.len() < count {
        states.push(EigenState::even(kappa, j)?);
        if states.len() < count {
            states.push(EigenState::odd(kappa, 2 * j + 1)?);
        }
        j += 1;
    }
    Ok(states)
}
