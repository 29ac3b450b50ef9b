//! Conversion from trap and scattering parameters to the scaled 1D coupling.

use serde::Serialize;

use crate::CliError;

/// Confinement-induced shift constant of the 1D scattering length.
pub const CONFINEMENT_C: f64 = 1.4603;
/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Closer than this (relative) to the confinement resonance is an error.
pub const RESONANCE_TOLERANCE: f64 = 1e-9;
/// Below this transverse-to-axial ratio the trap is not effectively 1D.
pub const MIN_ANISOTROPY: f64 = 10.0;
/// Above this `|a1D| / d` the contact model is questionable.
pub const MAX_RANGE_RATIO: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapUnits {
    /// Transverse trap frequency, rad/s.
    pub omega_perp: f64,
    /// Axial trap frequency, rad/s.
    pub omega: f64,
    /// Particle mass, kg.
    pub mass: f64,
    /// 3D s-wave scattering length, m.
    pub a3d: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Coupling {
    /// `g1D` in units of `hbar omega d`.
    pub g1d: f64,
    /// `g1D` in J m.
    pub g1d_si: f64,
    /// 1D scattering length, m.
    pub a1d: f64,
    /// Axial oscillator length, m.
    pub d: f64,
    /// Transverse oscillator length, m.
    pub d_perp: f64,
    pub warnings: Vec<String>,
}

pub fn g1d_from_physical(units: &TrapUnits) -> Result<Coupling, CliError> {
    let TrapUnits {
        omega_perp,
        omega,
        mass,
        a3d,
    } = *units;
    for (name, v) in [("omega_perp", omega_perp), ("omega", omega), ("mass", mass)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(CliError::validation(format!(
                "{name} must be finite and positive, got {v}"
            )));
        }
    }
    if !a3d.is_finite() || a3d == 0.0 {
        return Err(CliError::validation(format!(
            "a3d must be finite and non-zero, got {a3d}"
        )));
    }
    let d_perp = (HBAR / (mass * omega_perp)).sqrt();
    let d = (HBAR / (mass * omega)).sqrt();
    let shift = 1.0 - CONFINEMENT_C * a3d / d_perp;
    if shift.abs() <= RESONANCE_TOLERANCE {
        return Err(CliError::validation(format!(
            "a3d = {a3d} m sits on the confinement resonance (C a3d / d_perp = 1); g1D diverges"
        )));
    }
    let a1d = -(d_perp * d_perp / (2.0 * a3d)) * shift;
    let g1d_si = -2.0 * HBAR * HBAR / (mass * a1d);
    let g1d = g1d_si / (HBAR * omega * d);

    let mut warnings = Vec::new();
    let ratio = omega_perp / omega;
    if ratio < MIN_ANISOTROPY {
        warnings.push(format!("omega_perp / omega = {ratio:.3} < {MIN_ANISOTROPY}: the trap is not strongly anisotropic"));
    }
    if a1d.abs() / d > MAX_RANGE_RATIO {
        warnings.push(format!(
            "|a1D| / d = {:.3} > {MAX_RANGE_RATIO}: interaction range is not small against the trap length",
            a1d.abs() / d
        ));
    }
    Ok(Coupling {
        g1d,
        g1d_si,
        a1d,
        d,
        d_perp,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const RB87: f64 = 1.443_160_6e-25;

    fn trap(a3d: f64) -> TrapUnits {
        TrapUnits {
            omega_perp: 2.0 * std::f64::consts::PI * 20e3,
            omega: 2.0 * std::f64::consts::PI * 20.0,
            mass: RB87,
            a3d,
        }
    }

    fn d_perp() -> f64 {
        (HBAR / (RB87 * trap(1.0).omega_perp)).sqrt()
    }

    /// `g1D` with the confinement shift dropped, by hand: `4 hbar^2 a / (m d_perp^2)`.
    fn unshifted(a3d: f64) -> f64 {
        let u = trap(a3d);
        let d = (HBAR / (u.mass * u.omega)).sqrt();
        4.0 * HBAR * HBAR * a3d / (u.mass * d_perp().powi(2)) / (HBAR * u.omega * d)
    }

    #[test]
    fn half_shift_doubles_the_coupling() {
        let a3d = 0.5 * d_perp() / CONFINEMENT_C;
        let c = g1d_from_physical(&trap(a3d)).unwrap();
        assert!((c.g1d / unshifted(a3d) - 2.0).abs() <= 1e-12);
    }

    #[test]
    fn sign_and_small_scattering_length() {
        let c = g1d_from_physical(&trap(5.3e-9)).unwrap();
        assert!(c.a1d < 0.0 && c.g1d > 0.0);
        let tiny = g1d_from_physical(&trap(1e-15)).unwrap();
        assert!(tiny.g1d > 0.0 && tiny.g1d < 1e-5 * c.g1d);
        let attractive = g1d_from_physical(&trap(-5.3e-9)).unwrap();
        assert!(attractive.g1d < 0.0);
    }

    #[test]
    fn resonance_and_bad_input_are_errors() {
        assert!(g1d_from_physical(&trap(d_perp() / CONFINEMENT_C)).is_err());
        assert!(g1d_from_physical(&trap(0.0)).is_err());
        assert!(g1d_from_physical(&TrapUnits {
            mass: -1.0,
            ..trap(1e-9)
        })
        .is_err());
    }

    #[test]
    fn validity_warnings() {
        // near the resonance a1D is short against d; for weak scattering it is long
        let strong = 0.6 * d_perp() / CONFINEMENT_C;
        assert!(g1d_from_physical(&trap(strong))
            .unwrap()
            .warnings
            .is_empty());
        let loose = TrapUnits {
            omega_perp: 5.0 * trap(1.0).omega,
            ..trap(strong)
        };
        assert!(g1d_from_physical(&loose)
            .unwrap()
            .warnings
            .iter()
            .any(|w| w.contains("anisotropic")));
        let wide = g1d_from_physical(&trap(1e-12)).unwrap();
        assert!(wide.warnings.iter().any(|w| w.contains("|a1D|")));
    }
}
