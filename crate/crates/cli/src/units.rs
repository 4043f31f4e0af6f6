//! Unit-tagged quantities in scenario files.
//!
//! Every numeric field is either a bare number (interpreted as SI) or an
//! object `{"value": x, "unit": "..."}` with a unit from the fixed accepted
//! set. Units are resolved to SI at parse time; the engine never sees unit
//! strings.

use retphase_core::constants::{ELECTRON_MASS, ELEMENTARY_CHARGE, PhysicalConstants};
use serde::Deserialize;

use crate::CliError;

/// Physical dimension a field expects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Time,
    Length,
    Mass,
    Charge,
    Speed,
}

impl Dimension {
    fn describe(&self) -> &'static str {
        match self {
            Dimension::Time => "time (s, ns)",
            Dimension::Length => "length (m, cm, um, nm)",
            Dimension::Mass => "mass (kg, m_e)",
            Dimension::Charge => "charge (C, e)",
            Dimension::Speed => "speed (c-fraction)",
        }
    }
}

/// A number as it appears in the file, before unit resolution.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum RawQuantity {
    Bare(f64),
    WithUnit { value: f64, unit: String },
}

/// Resolves a quantity to SI; `path` names the field in error messages.
pub fn resolve(
    q: &RawQuantity,
    dim: Dimension,
    constants: &PhysicalConstants,
    path: &str,
) -> Result<f64, CliError> {
    let (value, unit) = match q {
        RawQuantity::Bare(v) => return check_finite(*v, path),
        RawQuantity::WithUnit { value, unit } => (*value, unit.as_str()),
    };
    let factor = match (dim, unit) {
        (Dimension::Time, "s") => 1.0,
        (Dimension::Time, "ns") => 1e-9,
        (Dimension::Length, "m") => 1.0,
        (Dimension::Length, "cm") => 1e-2,
        (Dimension::Length, "um") => 1e-6,
        (Dimension::Length, "nm") => 1e-9,
        (Dimension::Mass, "kg") => 1.0,
        (Dimension::Mass, "m_e") => ELECTRON_MASS,
        (Dimension::Charge, "C") => 1.0,
        (Dimension::Charge, "e") => ELEMENTARY_CHARGE,
        (Dimension::Speed, "c-fraction") => constants.c,
        _ => {
            return Err(CliError::schema(format!(
                "{path}: unit '{unit}' is not valid for {}",
                dim.describe()
            )))
        }
    };
    check_finite(value * factor, path)
}

fn check_finite(v: f64, path: &str) -> Result<f64, CliError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::schema(format!("{path}: value must be finite, got {v}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn consts() -> PhysicalConstants {
        PhysicalConstants::codata2018()
    }

    #[test]
    fn bare_numbers_are_si() {
        let q = RawQuantity::Bare(2.5);
        assert_eq!(resolve(&q, Dimension::Length, &consts(), "d").unwrap(), 2.5);
    }

    #[test]
    fn unit_conversions() {
        let cases = [
            (Dimension::Time, "ns", 50.0, 50e-9),
            (Dimension::Length, "cm", 1.0, 1e-2),
            (Dimension::Length, "um", 3.0, 3e-6),
            (Dimension::Length, "nm", 10.0, 10e-9),
            (Dimension::Mass, "m_e", 2.0, 2.0 * ELECTRON_MASS),
            (Dimension::Charge, "e", -1.0, -ELEMENTARY_CHARGE),
        ];
        for (dim, unit, value, expected) in cases {
            let q = RawQuantity::WithUnit { value, unit: unit.into() };
            let got = resolve(&q, dim, &consts(), "x").unwrap();
            assert!((got - expected).abs() <= 1e-15 * expected.abs(), "{unit}: {got} vs {expected}");
        }
        let q = RawQuantity::WithUnit { value: 0.5, unit: "c-fraction".into() };
        assert_eq!(resolve(&q, Dimension::Speed, &consts(), "x").unwrap(), 0.5 * consts().c);
    }

    #[test]
    fn wrong_dimension_is_schema_error_with_path() {
        let q = RawQuantity::WithUnit { value: 1.0, unit: "kg".into() };
        let err = resolve(&q, Dimension::Length, &consts(), "builder.params.d").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("builder.params.d"), "{msg}");
        assert!(msg.contains("kg"), "{msg}");
    }

    #[test]
    fn non_finite_rejected() {
        let q = RawQuantity::Bare(f64::NAN);
        assert!(resolve(&q, Dimension::Time, &consts(), "t").is_err());
    }
}
