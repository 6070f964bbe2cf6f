//! Vacuum-fluctuation, radiation-reaction and total boundary-dependent
//! ground-state shifts, plus static and thermal comparators.
//!
//! With `P = 3ω₀/(128π)` and weights `w_ii = p_i`, `w_xz = √(p_x p_z)`
//! (the xz term is counted once):
//!
//! ```text
//! vf    = −P Σ w_c [(1 + n̄₂) f_c − g_c]
//! rr    = +P Σ w_c f_c
//! total = −P Σ w_c [n̄₂ f_c − g_c]
//! ```
//!
//! All values are per α₀ (reduced units).

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::structfun::{
    g_static_with_err, stat_functions, Component, PerComponent, QuadratureSettings, StatFunctions,
};
use crate::units::{unruh_temperature, AtomSpec, Kinematics, Polarization};

/// Multiplicity of the xz term in the index contraction.
pub const CROSS_MULTIPLICITY: f64 = 1.0;

/// Relative tolerance of the vf + rr = total identity checked on every call.
pub const IDENTITY_TOL: f64 = 1e-10;

/// Guard factor: a ratio whose denominator is below this many error
/// estimates is reported as indeterminate.
pub const RATIO_GUARD: f64 = 1e3;

pub fn prefactor(omega0: f64) -> f64 {
    3.0 * omega0 / (128.0 * PI)
}

/// Contraction weights for each component.
pub fn weights(pol: &Polarization, cross_multiplicity: f64) -> PerComponent<f64> {
    PerComponent {
        xx: pol.px(),
        yy: pol.py(),
        zz: pol.pz(),
        xz: cross_multiplicity * pol.w_xz(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComponentShift {
    pub weight: f64,
    pub vf: f64,
    pub rr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftBreakdown {
    pub vf_reduced: f64,
    pub rr_reduced: f64,
    pub total_reduced: f64,
    /// `Σ w_c [n̄₂ f_c − g_c]`, time⁻³; `total = −3ω₀/(128π) · bracket`.
    pub bracket: f64,
    pub per_component: PerComponent<ComponentShift>,
    pub err_est: f64,
    pub stat: StatFunctions,
}

impl ShiftBreakdown {
    /// Assembles the breakdown from precomputed statistical functions.
    pub fn from_stat(omega0: f64, pol: &Polarization, stat: StatFunctions, cross_multiplicity: f64) -> Result<Self> {
        let p = prefactor(omega0);
        let w = weights(pol, cross_multiplicity);
        let n = stat.nbar2;

        let per_component = PerComponent::from_fn(|c| {
            let (f, g, wc) = (stat.f.get(c), stat.g.get(c), w.get(c));
            ComponentShift {
                weight: wc,
                vf: -p * wc * ((1.0 + n) * f - g),
                rr: p * wc * f,
            }
        });

        let mut vf = 0.0;
        let mut rr = 0.0;
        let mut bracket = 0.0;
        let mut err = 0.0;
        for c in Component::ALL {
            let (f, g, wc) = (stat.f.get(c), stat.g.get(c), w.get(c));
            vf += wc * ((1.0 + n) * f - g);
            rr += wc * f;
            bracket += wc * (n * f - g);
            err += wc * stat.tol_achieved.get(c);
        }
        let vf = -p * vf;
        let rr = p * rr;
        let total = -p * bracket;

        let scale = total.abs().max(vf.abs()).max(rr.abs());
        let mismatch = if scale > 0.0 {
            (vf + rr - total).abs() / scale
        } else {
            0.0
        };
        if mismatch > IDENTITY_TOL {
            return Err(Error::Consistency {
                what: "vf + rr = total",
                mismatch,
            });
        }

        Ok(ShiftBreakdown {
            vf_reduced: vf,
            rr_reduced: rr,
            total_reduced: total,
            bracket,
            per_component,
            err_est: p * err,
            stat,
        })
    }
}

pub fn shift_total(atom: &AtomSpec, kin: &Kinematics, settings: &QuadratureSettings) -> Result<ShiftBreakdown> {
    let stat = stat_functions(atom.omega0, kin.z, kin.a, settings)?;
    ShiftBreakdown::from_stat(atom.omega0, &atom.pol, stat, CROSS_MULTIPLICITY)
}

pub fn shift_vf(atom: &AtomSpec, kin: &Kinematics, settings: &QuadratureSettings) -> Result<f64> {
    let stat = stat_functions(atom.omega0, kin.z, kin.a, settings)?;
    let w = weights(&atom.pol, CROSS_MULTIPLICITY);
    let n = stat.nbar2;
    let sum: f64 = Component::ALL
        .iter()
        .map(|&c| w.get(c) * ((1.0 + n) * stat.f.get(c) - stat.g.get(c)))
        .sum();
    Ok(-prefactor(atom.omega0) * sum)
}

/// Radiation reaction needs only the closed forms; no quadrature.
pub fn shift_rr(atom: &AtomSpec, kin: &Kinematics) -> Result<f64> {
    let w = weights(&atom.pol, CROSS_MULTIPLICITY);
    let mut sum = 0.0;
    for c in Component::ALL {
        sum += w.get(c) * crate::structfun::f_component(c, atom.omega0, kin.z, kin.a)?;
    }
    Ok(prefactor(atom.omega0) * sum)
}

/// Static atom (a = 0): `+3ω₀/(128π) Σ p_i g_ii(ω₀, z, 0)`.
pub fn shift_static(atom: &AtomSpec, z: f64, settings: &QuadratureSettings) -> Result<f64> {
    shift_static_with_err(atom, z, settings).map(|(v, _)| v)
}

pub fn shift_static_with_err(atom: &AtomSpec, z: f64, settings: &QuadratureSettings) -> Result<(f64, f64)> {
    let w = weights(&atom.pol, CROSS_MULTIPLICITY);
    let mut value = 0.0;
    let mut err = 0.0;
    for c in [Component::Xx, Component::Yy, Component::Zz] {
        let (g, e) = g_static_with_err(c, atom.omega0, z, settings)?;
        value += w.get(c) * g;
        err += w.get(c) * e;
    }
    let p = prefactor(atom.omega0);
    Ok((p * value, p * err))
}

/// Quoted long-distance shift of a static isotropic atom in a thermal bath
/// at low temperature, `−(1/4π)·T/(4z³)` per α₀.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalAsymptote {
    pub value: f64,
    /// `T ≪ ω₀` and `z ≫ 1/T` hold by the requested strictness, and the atom is isotropic.
    pub valid: bool,
}

pub fn thermal_asymptote_longdist(atom: &AtomSpec, z: f64, temperature: f64, strictness: f64) -> ThermalAsymptote {
    let value = -temperature / (16.0 * PI * z * z * z);
    let valid = temperature > 0.0
        && strictness * temperature <= atom.omega0
        && z * temperature >= strictness
        && atom.pol.is_isotropic();
    ThermalAsymptote { value, valid }
}

/// A guarded ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ratio {
    Value(f64),
    /// Denominator within the guard band of its own error estimate.
    Indeterminate,
    /// Comparator outside its regime of validity.
    NotApplicable,
}

impl Ratio {
    pub fn value(&self) -> Option<f64> {
        match self {
            Ratio::Value(v) => Some(*v),
            _ => None,
        }
    }

    fn guarded(num: f64, den: f64, den_err: f64) -> Ratio {
        if den == 0.0 || den.abs() < RATIO_GUARD * den_err {
            Ratio::Indeterminate
        } else {
            Ratio::Value(num / den)
        }
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ratio::Value(v) => write!(f, "{v:.16e}"),
            Ratio::Indeterminate => f.write_str("indeterminate"),
            Ratio::NotApplicable => f.write_str("NA"),
        }
    }
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Ratio::Value(v) => s.serialize_f64(*v),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparatorResult {
    /// `total(a) / total(0)` at equal (ω₀, z).
    pub ratio_to_static: Ratio,
    /// `thermal(T = a/2π) / total(a)`.
    pub ratio_thermal_to_accel: Ratio,
    pub thermal_asymptote: ThermalAsymptote,
}

pub fn ratios(
    atom: &AtomSpec,
    kin: &Kinematics,
    settings: &QuadratureSettings,
    strictness: f64,
) -> Result<ComparatorResult> {
    let accel = shift_total(atom, kin, settings)?;
    let (stat, stat_err) = shift_static_with_err(atom, kin.z, settings)?;
    Ok(comparators(atom, kin, &accel, stat, stat_err, strictness))
}

/// Comparator assembly from already evaluated shifts.
pub fn comparators(
    atom: &AtomSpec,
    kin: &Kinematics,
    accel: &ShiftBreakdown,
    stat: f64,
    stat_err: f64,
    strictness: f64,
) -> ComparatorResult {
    let ratio_to_static = Ratio::guarded(accel.total_reduced, stat, stat_err);
    let thermal = thermal_asymptote_longdist(atom, kin.z, unruh_temperature(kin.a), strictness);
    let ratio_thermal_to_accel = if thermal.valid {
        Ratio::guarded(thermal.value, accel.total_reduced, accel.err_est)
    } else {
        Ratio::NotApplicable
    };
    ComparatorResult {
        ratio_to_static,
        ratio_thermal_to_accel,
        thermal_asymptote: thermal,
    }
}
