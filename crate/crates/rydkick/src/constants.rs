//! Physical constants (CODATA 2018), SI units.
//!
//! All dimensional bookkeeping in the crate goes through this single table so
//! that derived dimensionless couplings are reproducible bit-for-bit.

/// Reduced Planck constant (J s).
pub const HBAR: f64 = 1.054_571_817_646_156e-34;

/// Electron mass (kg).
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;

/// Bohr radius (m).
pub const BOHR_RADIUS: f64 = 5.291_772_109_03e-11;

/// Atomic mass unit (kg).
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;

/// Elementary charge (C). Exact by definition.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

/// Vacuum permittivity (F/m).
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn hbar_matches_exact_planck_constant() {
        // h = 6.62607015e-34 J s exactly, by the SI definition.
        let h = 6.626_070_15e-34;
        assert!((HBAR - h / (2.0 * PI)).abs() / HBAR < 1e-15);
    }

    #[test]
    fn bohr_radius_consistent_with_defining_relation() {
        // a0 = 4 pi eps0 hbar^2 / (m_e e^2); CODATA values close to 1e-10 rel.
        let a0 = 4.0 * PI * VACUUM_PERMITTIVITY * HBAR * HBAR
            / (ELECTRON_MASS * ELEMENTARY_CHARGE * ELEMENTARY_CHARGE);
        assert!((a0 - BOHR_RADIUS).abs() / BOHR_RADIUS < 1e-9);
    }
}
