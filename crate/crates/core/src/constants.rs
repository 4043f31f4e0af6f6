//! Physical constants (SI) and Planck-scale reference quantities.
//!
//! CODATA 2018 values are compiled in as defaults. A constants set can be
//! overridden per run — limit checks such as "dial `c` very large and recover
//! the instantaneous model" rely on this.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of light in vacuum (m/s, exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Newtonian constant of gravitation (m³ kg⁻¹ s⁻²).
pub const GRAVITATIONAL_CONSTANT: f64 = 6.674_30e-11;

/// Reduced Planck constant ℏ = h/2π (J·s).
pub const HBAR: f64 = 1.054_571_817e-34;

/// Vacuum permittivity ε₀ (F/m).
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_8128e-12;

/// Elementary charge (C, exact).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

/// Electron mass (kg).
pub const ELECTRON_MASS: f64 = 9.109_383_7015e-31;

/// The fixed set of constants the integrands consume.
///
/// Immutable after construction; `k_e` is tied to `epsilon0` by
/// k_e = 1/(4πε₀) and the constructor enforces the relation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// Speed of light (m/s).
    pub c: f64,
    /// Gravitational constant (m³ kg⁻¹ s⁻²).
    pub g: f64,
    /// Reduced Planck constant (J·s).
    pub hbar: f64,
    /// Coulomb constant 1/(4πε₀) (N·m²·C⁻²).
    pub k_e: f64,
    /// Vacuum permittivity (F/m).
    pub epsilon0: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::codata2018()
    }
}

impl PhysicalConstants {
    /// CODATA 2018 values.
    pub fn codata2018() -> Self {
        let epsilon0 = VACUUM_PERMITTIVITY;
        Self {
            c: SPEED_OF_LIGHT,
            g: GRAVITATIONAL_CONSTANT,
            hbar: HBAR,
            k_e: 1.0 / (4.0 * std::f64::consts::PI * epsilon0),
            epsilon0,
        }
    }

    /// Builds a constants set from `c`, `G`, `ħ` and `ε₀`, deriving `k_e`.
    pub fn new(c: f64, g: f64, hbar: f64, epsilon0: f64) -> Result<Self> {
        let k_e = 1.0 / (4.0 * std::f64::consts::PI * epsilon0);
        let out = Self { c, g, hbar, k_e, epsilon0 };
        out.validate()?;
        Ok(out)
    }

    /// Natural units c = G = ħ = 1, ε₀ = 1/4π (so that k_e = 1).
    pub fn natural() -> Self {
        Self {
            c: 1.0,
            g: 1.0,
            hbar: 1.0,
            k_e: 1.0,
            epsilon0: 1.0 / (4.0 * std::f64::consts::PI),
        }
    }

    /// Checks positivity and the k_e = 1/(4πε₀) tie, to 1e-12 relative.
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("c", self.c),
            ("G", self.g),
            ("hbar", self.hbar),
            ("k_e", self.k_e),
            ("epsilon0", self.epsilon0),
        ];
        for (name, v) in fields {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "constant {name} must be strictly positive and finite, got {v}"
                )));
            }
        }
        let derived = 1.0 / (4.0 * std::f64::consts::PI * self.epsilon0);
        let rel = (self.k_e - derived).abs() / derived;
        if rel > 1e-12 {
            return Err(Error::InvalidInput(format!(
                "k_e is inconsistent with epsilon0: k_e = {}, 1/(4*pi*epsilon0) = {derived}",
                self.k_e
            )));
        }
        Ok(())
    }
}

/// Planck mass √(ħc/G) (kg).
pub fn planck_mass(constants: &PhysicalConstants) -> f64 {
    (constants.hbar * constants.c / constants.g).sqrt()
}

/// Planck charge √(4πε₀ħc) (C).
pub fn planck_charge(constants: &PhysicalConstants) -> f64 {
    (4.0 * std::f64::consts::PI * constants.epsilon0 * constants.hbar * constants.c).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn codata_planck_mass() {
        let m_p = planck_mass(&PhysicalConstants::codata2018());
        // sqrt(hbar*c/G) from CODATA 2018 inputs
        assert_relative_eq!(m_p, 2.176e-8, max_relative = 1e-3);
    }

    #[test]
    fn codata_planck_charge() {
        let consts = PhysicalConstants::codata2018();
        let q_p = planck_charge(&consts);
        assert_relative_eq!(q_p, 1.8755e-18, max_relative = 1e-3);

        // e / q_P = sqrt(alpha), the square root of the fine-structure constant
        let ratio = ELEMENTARY_CHARGE / q_p;
        assert_relative_eq!(ratio, 0.0854, max_relative = 1e-3);
        let alpha: f64 = 1.0 / 137.035_999_084;
        assert_relative_eq!(ratio, alpha.sqrt(), max_relative = 1e-6);
        // single electron charge is ~0.1 of the Planck charge, to one figure
        assert!((0.05..0.15).contains(&ratio));
    }

    #[test]
    fn natural_units_identity() {
        let n = PhysicalConstants::natural();
        assert_eq!(planck_mass(&n), 1.0);
        assert_relative_eq!(planck_charge(&n), 1.0, max_relative = 1e-15);
        assert_relative_eq!(n.k_e, 1.0, max_relative = 1e-15);
    }

    #[test]
    fn planck_scales_are_half_degree_in_hbar() {
        let base = PhysicalConstants::codata2018();
        let mut scaled = base;
        scaled.hbar *= 4.0;
        assert_relative_eq!(
            planck_mass(&scaled),
            2.0 * planck_mass(&base),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            planck_charge(&scaled),
            2.0 * planck_charge(&base),
            max_relative = 1e-14
        );
    }

    #[test]
    fn planck_scales_are_half_degree_in_c() {
        let base = PhysicalConstants::codata2018();
        let mut scaled = base;
        scaled.c *= 9.0;
        assert_relative_eq!(
            planck_mass(&scaled),
            3.0 * planck_mass(&base),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            planck_charge(&scaled),
            3.0 * planck_charge(&base),
            max_relative = 1e-14
        );
    }

    #[test]
    fn k_e_tied_to_epsilon0() {
        let consts = PhysicalConstants::codata2018();
        consts.validate().unwrap();
        assert_relative_eq!(consts.k_e, 8.987_551_792_3e9, max_relative = 1e-10);

        let mut broken = consts;
        broken.k_e *= 1.0 + 1e-6;
        assert!(broken.validate().is_err());
    }

    #[test]
    fn rejects_nonpositive_constants() {
        assert!(PhysicalConstants::new(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(PhysicalConstants::new(1.0, -1.0, 1.0, 1.0).is_err());
        assert!(PhysicalConstants::new(1.0, 1.0, f64::NAN, 1.0).is_err());
    }
}
