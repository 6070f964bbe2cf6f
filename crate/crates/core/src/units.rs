//! Natural-unit canonicalization (c = ħ = 1, every quantity a power of seconds).
//!
//! Accelerations become angular frequencies `a_si / c` and distances become
//! light-travel times `z_si / c`. The static polarizability α₀ is never
//! stored; polarization enters only through the per-axis fractions
//! `p_i = α_i / α₀`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact SI speed of light, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Tolerance on `p_x + p_y + p_z = 1` accepted from callers.
pub const POLARIZATION_SUM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitMode {
    Si,
    Natural,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitSystem {
    pub mode: UnitMode,
    pub c: f64,
}

impl UnitSystem {
    pub const SI: UnitSystem = UnitSystem {
        mode: UnitMode::Si,
        c: SPEED_OF_LIGHT,
    };
    pub const NATURAL: UnitSystem = UnitSystem {
        mode: UnitMode::Natural,
        c: SPEED_OF_LIGHT,
    };

    /// Interprets `(accel, z)` in this system and returns natural-unit kinematics.
    pub fn kinematics(&self, accel: f64, z: f64) -> Result<Kinematics> {
        match self.mode {
            UnitMode::Si => to_natural(accel, z),
            UnitMode::Natural => Kinematics::new(accel, z),
        }
    }
}

/// Polarization weights of a two-level atom, as fractions of α₀ per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Polarization {
    px: f64,
    py: f64,
    pz: f64,
}

impl Polarization {
    pub const ISOTROPIC: Polarization = Polarization {
        px: 1.0 / 3.0,
        py: 1.0 / 3.0,
        pz: 1.0 / 3.0,
    };
    pub const X: Polarization = Polarization {
        px: 1.0,
        py: 0.0,
        pz: 0.0,
    };
    pub const Y: Polarization = Polarization {
        px: 0.0,
        py: 1.0,
        pz: 0.0,
    };
    pub const Z: Polarization = Polarization {
        px: 0.0,
        py: 0.0,
        pz: 1.0,
    };

    /// Validates the weights. Sums within [`POLARIZATION_SUM_TOL`] of one are
    /// accepted and then renormalized so the stored weights sum to one.
    pub fn new(px: f64, py: f64, pz: f64) -> Result<Self> {
        for (name, p) in [("p_x", px), ("p_y", py), ("p_z", pz)] {
            if !p.is_finite() {
                return Err(Error::Polarization(format!("{name} = {p} is not finite")));
            }
            if p < 0.0 {
                return Err(Error::Polarization(format!("{name} = {p} is negative")));
            }
        }
        let sum = px + py + pz;
        if (sum - 1.0).abs() > POLARIZATION_SUM_TOL {
            return Err(Error::Polarization(format!(
                "weights sum to {sum}, expected 1"
            )));
        }
        Ok(Polarization {
            px: px / sum,
            py: py / sum,
            pz: pz / sum,
        })
    }

    pub fn px(&self) -> f64 {
        self.px
    }

    pub fn py(&self) -> f64 {
        self.py
    }

    pub fn pz(&self) -> f64 {
        self.pz
    }

    /// Cross weight `sqrt(p_x p_z)` multiplying the xz statistical functions.
    pub fn w_xz(&self) -> f64 {
        (self.px * self.pz).sqrt()
    }

    pub fn is_isotropic(&self) -> bool {
        let third = 1.0 / 3.0;
        [self.px, self.py, self.pz]
            .iter()
            .all(|p| (p - third).abs() < POLARIZATION_SUM_TOL)
    }
}

/// `validate_polarization`: checks the weights and returns them with the
/// derived cross weight.
pub fn validate_polarization(px: f64, py: f64, pz: f64) -> Result<(Polarization, f64)> {
    let pol = Polarization::new(px, py, pz)?;
    Ok((pol, pol.w_xz()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomSpec {
    /// Angular transition frequency ω₀, rad/s.
    pub omega0: f64,
    pub pol: Polarization,
}

impl AtomSpec {
    pub fn new(omega0: f64, pol: Polarization) -> Result<Self> {
        check_positive("omega0", omega0)?;
        Ok(AtomSpec { omega0, pol })
    }

    pub fn isotropic(omega0: f64) -> Result<Self> {
        Self::new(omega0, Polarization::ISOTROPIC)
    }
}

/// Proper acceleration and wall distance in natural units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Kinematics {
    /// `a_si / c`, s⁻¹.
    pub a: f64,
    /// `z_si / c`, s.
    pub z: f64,
}

impl Kinematics {
    pub fn new(a: f64, z: f64) -> Result<Self> {
        if !a.is_finite() {
            return Err(Error::domain("a", a, "must be finite"));
        }
        if a < 0.0 {
            return Err(Error::domain("a", a, "must be non-negative"));
        }
        check_positive("z", z)?;
        Ok(Kinematics { a, z })
    }

    pub fn az(&self) -> f64 {
        self.a * self.z
    }

    pub fn w0z(&self, omega0: f64) -> f64 {
        omega0 * self.z
    }

    pub fn with_accel(&self, a: f64) -> Result<Self> {
        Self::new(a, self.z)
    }

    pub fn with_z(&self, z: f64) -> Result<Self> {
        Self::new(self.a, z)
    }

    /// Back to SI: `(a_si [m/s²], z_si [m])`.
    pub fn to_si(&self) -> (f64, f64) {
        (self.a * SPEED_OF_LIGHT, self.z * SPEED_OF_LIGHT)
    }
}

pub(crate) fn check_positive(field: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::domain(field, value, "must be finite"));
    }
    if value <= 0.0 {
        return Err(Error::domain(field, value, "must be positive"));
    }
    Ok(())
}

/// Converts an SI acceleration (m/s²) and wall distance (m) into natural units.
pub fn to_natural(a_si: f64, z_si: f64) -> Result<Kinematics> {
    if !a_si.is_finite() {
        return Err(Error::domain("a_si", a_si, "must be finite"));
    }
    if a_si < 0.0 {
        return Err(Error::domain("a_si", a_si, "must be non-negative"));
    }
    check_positive("z_si", z_si)?;
    Kinematics::new(a_si / SPEED_OF_LIGHT, z_si / SPEED_OF_LIGHT)
}

/// Dimensionless groups `(a z, ω₀ z)` straight from SI inputs.
pub fn dimensionless_groups_si(a_si: f64, z_si: f64, omega0: f64) -> (f64, f64) {
    (
        a_si * z_si / (SPEED_OF_LIGHT * SPEED_OF_LIGHT),
        omega0 * z_si / SPEED_OF_LIGHT,
    )
}

/// Unruh temperature `a / 2π` in natural units (s⁻¹).
pub fn unruh_temperature(a: f64) -> f64 {
    a / (2.0 * std::f64::consts::PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn converts_strong_acceleration() {
        let kin = to_natural(1e23, 1e-6).unwrap();
        assert_relative_eq!(kin.a, 3.3356409519815204e14, max_relative = 1e-15);
        assert_relative_eq!(kin.az(), 1.1126500560536185, max_relative = 1e-14);
        assert_relative_eq!(kin.w0z(1e15), 3.3356409519815204, max_relative = 1e-14);
    }

    #[test]
    fn zero_acceleration_is_valid() {
        let kin = to_natural(0.0, 1e-8).unwrap();
        assert_eq!(kin.a, 0.0);
        assert_relative_eq!(kin.w0z(1e15), 3.3356409519815204e-2, max_relative = 1e-14);
    }

    #[test]
    fn thermal_exponent_at_1e22() {
        let kin = to_natural(1e22, 1e-6).unwrap();
        let x = 2.0 * std::f64::consts::PI * 1e15 / kin.a;
        // mpmath: 2π·1e15·c/1e22
        assert_relative_eq!(x, 188.36515673088532773, max_relative = 1e-14);
    }

    #[test]
    fn rejects_bad_inputs_naming_field() {
        match to_natural(-1.0, 1e-6) {
            Err(Error::Domain { field, .. }) => assert_eq!(field, "a_si"),
            other => panic!("unexpected {other:?}"),
        }
        match to_natural(1.0, 0.0) {
            Err(Error::Domain { field, .. }) => assert_eq!(field, "z_si"),
            other => panic!("unexpected {other:?}"),
        }
        match to_natural(f64::NAN, 1.0) {
            Err(Error::Domain { field, .. }) => assert_eq!(field, "a_si"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(AtomSpec::isotropic(0.0).is_err());
        assert!(AtomSpec::isotropic(f64::INFINITY).is_err());
    }

    #[test]
    fn polarization_examples() {
        let (iso, w) = validate_polarization(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0).unwrap();
        assert!(iso.is_isotropic());
        assert_relative_eq!(w, 1.0 / 3.0, max_relative = 1e-15);

        let (_, w) = validate_polarization(1.0, 0.0, 0.0).unwrap();
        assert_eq!(w, 0.0);

        let (_, w) = validate_polarization(0.5, 0.0, 0.5).unwrap();
        assert_eq!(w, 0.5);
    }

    #[test]
    fn polarization_errors() {
        assert!(Polarization::new(-0.1, 0.6, 0.5).is_err());
        assert!(Polarization::new(0.5, 0.5, 0.5).is_err());
        assert!(Polarization::new(f64::NAN, 0.5, 0.5).is_err());
        // Printed-precision weights are accepted and renormalized.
        let p = Polarization::new(0.333333, 0.333333, 0.333334).unwrap();
        assert!((p.px() + p.py() + p.pz() - 1.0).abs() < 1e-12);
    }
}
