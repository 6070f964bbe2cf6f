//! Regime classification and the closed-form expansions of the total,
//! vacuum-fluctuation and radiation-reaction shifts in each regime.
//!
//! Every expansion is written per α₀ with `α_i → p_i` and `√(α_x α_z) → w_xz`.
//! "≪" is made concrete by a strictness factor `s`: `x ≪ y` means `y/x ≥ s`.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::shift::shift_total;
use crate::structfun::{thermal_factor, QuadratureSettings};
use crate::units::{AtomSpec, Kinematics};

pub const DEFAULT_STRICTNESS: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Regime {
    LowAShort,
    LowAIntermediate,
    LowALong,
    HighAShort,
    HighAFarIntermediate,
    HighAFarLong,
    NearResNear,
    NearResFar,
    Ambiguous,
}

impl Regime {
    /// Every regime with a defined expansion, in classification order.
    pub const DEFINED: [Regime; 8] = [
        Regime::LowAShort,
        Regime::LowAIntermediate,
        Regime::LowALong,
        Regime::HighAShort,
        Regime::HighAFarIntermediate,
        Regime::HighAFarLong,
        Regime::NearResNear,
        Regime::NearResFar,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::LowAShort => "LOW_A_SHORT",
            Regime::LowAIntermediate => "LOW_A_INTERMEDIATE",
            Regime::LowALong => "LOW_A_LONG",
            Regime::HighAShort => "HIGH_A_SHORT",
            Regime::HighAFarIntermediate => "HIGH_A_FAR_INTERMEDIATE",
            Regime::HighAFarLong => "HIGH_A_FAR_LONG",
            Regime::NearResNear => "NEAR_RES_NEAR",
            Regime::NearResFar => "NEAR_RES_FAR",
            Regime::Ambiguous => "AMBIGUOUS",
        }
    }

    pub fn parse(s: &str) -> Option<Regime> {
        Regime::DEFINED
            .into_iter()
            .chain([Regime::Ambiguous])
            .find(|r| r.as_str().eq_ignore_ascii_case(s))
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Acceleration band alone, independent of distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AccelBand {
    LowA,
    HighA,
    NearRes,
    /// `a/ω₀` sits exactly on a band edge.
    Boundary,
}

impl AccelBand {
    pub fn as_str(&self) -> &'static str {
        match self {
            AccelBand::LowA => "LOW_A",
            AccelBand::HighA => "HIGH_A",
            AccelBand::NearRes => "NEAR_RES",
            AccelBand::Boundary => "BOUNDARY",
        }
    }
}

pub fn accel_band(omega0: f64, a: f64, strictness: f64) -> AccelBand {
    let r = a / omega0;
    if r * strictness <= 1.0 {
        AccelBand::LowA
    } else if r >= strictness {
        AccelBand::HighA
    } else if r * strictness > 1.0 && r < strictness {
        AccelBand::NearRes
    } else {
        AccelBand::Boundary
    }
}

/// Dimensionless groups and how deeply the classified regime holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Margins {
    pub a_over_omega0: f64,
    pub az: f64,
    pub w0z: f64,
    /// Smallest factor by which the regime's defining inequalities hold;
    /// `≥ strictness` inside the regime.
    pub depth: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub regime: Regime,
    pub band: AccelBand,
    pub margins: Margins,
}

/// Depth of each defining inequality; the regime holds when all are ≥ s.
/// The near-resonance band is open on both sides and contributes +∞ inside.
fn depths(regime: Regime, omega0: f64, a: f64, z: f64, s: f64) -> Vec<f64> {
    let low = omega0 / a;
    let high = a / omega0;
    let az = a * z;
    let w0z = omega0 * z;
    let band = if high * s > 1.0 && high < s {
        f64::INFINITY
    } else {
        0.0
    };
    match regime {
        Regime::LowAShort => vec![low, 1.0 / w0z],
        Regime::LowAIntermediate => vec![low, 1.0 / az, w0z],
        Regime::LowALong => vec![low, az],
        Regime::HighAShort => vec![high, 1.0 / az],
        Regime::HighAFarIntermediate => vec![high, az, 1.0 / w0z],
        Regime::HighAFarLong => vec![high, az, w0z],
        Regime::NearResNear => vec![band, 1.0 / w0z],
        Regime::NearResFar => vec![band, w0z],
        Regime::Ambiguous => vec![0.0],
    }
}

/// Depth of `regime` at the given point; may be below `strictness` when the
/// point lies outside it.
pub fn regime_depth(regime: Regime, omega0: f64, a: f64, z: f64, strictness: f64) -> f64 {
    depths(regime, omega0, a, z, strictness)
        .into_iter()
        .fold(f64::INFINITY, f64::min)
}

/// Assigns exactly one regime. `a = 0` falls in the low-acceleration branch.
pub fn classify(omega0: f64, a: f64, z: f64, strictness: f64) -> Regime {
    classify_full(omega0, a, z, strictness).regime
}

pub fn classify_full(omega0: f64, a: f64, z: f64, strictness: f64) -> Classification {
    let s = strictness.max(1.0);
    let mut regime = Regime::Ambiguous;
    let mut depth = 0.0_f64;
    for r in Regime::DEFINED {
        let d = regime_depth(r, omega0, a, z, s);
        if d >= s {
            regime = r;
            depth = d;
            break;
        }
        depth = depth.max(d);
    }
    Classification {
        regime,
        band: accel_band(omega0, a, s),
        margins: Margins {
            a_over_omega0: a / omega0,
            az: a * z,
            w0z: omega0 * z,
            depth,
        },
    }
}

/// An alternative printed form of the same regime's expansion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Variant {
    pub name: &'static str,
    pub total: f64,
}

/// The expansion alone, without the exact evaluation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Asymptote {
    pub regime: Regime,
    pub total: f64,
    pub vf: Option<f64>,
    pub rr: Option<f64>,
    pub variants: Vec<Variant>,
    pub flags: Vec<&'static str>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoteReport {
    pub regime: Regime,
    pub margins: Margins,
    pub asymptote_total: f64,
    pub asymptote_vf: Option<f64>,
    pub asymptote_rr: Option<f64>,
    pub exact_total: f64,
    pub exact_vf: f64,
    pub exact_rr: f64,
    pub err_est: f64,
    /// `|exact − asymptote| / max(|exact|, err_est)`.
    pub rel_deviation: f64,
    pub variants: Vec<Variant>,
    pub flags: Vec<&'static str>,
}

const INV4PI: f64 = 1.0 / (4.0 * PI);

/// Evaluates the regime's expansion at `(atom, kin)` regardless of whether
/// the point actually lies in that regime.
pub fn asymptote_value(regime: Regime, atom: &AtomSpec, kin: &Kinematics) -> Result<Asymptote> {
    let w0 = atom.omega0;
    let (a, z) = (kin.a, kin.z);
    let (px, py, pz) = (atom.pol.px(), atom.pol.py(), atom.pol.pz());
    let w = atom.pol.w_xz();
    let iso = atom.pol.is_isotropic();
    let mut variants = Vec::new();
    let mut flags = Vec::new();

    let (total, vf, rr) = match regime {
        Regime::Ambiguous => return Err(Error::UnsupportedRegime("AMBIGUOUS")),

        Regime::LowAShort => {
            // a²·2w/(az) is written as 2a·w/z so the a → 0 limit is exact.
            let ln = (2.0 * w0 * z).ln();
            let vf = -INV4PI
                * (-3.0 * w0 * w0 * pz / (4.0 * PI * z * z) + 3.0 * a * w0 * w0 * w / (4.0 * PI * z)
                    - w0 * w0 * (a * a + w0 * w0) / PI * ln * (px + py - pz));
            let rr = -INV4PI
                * (3.0 * w0 * (px + py + 2.0 * pz) / (32.0 * z.powi(3))
                    - 3.0 * a * a * w0 / (64.0 * z) * (px + 3.0 * py + 32.0 * w0 * w0 * z * z * pz)
                    - 3.0 * a * w0 / (64.0 * z) * 2.0 * w / z);
            let total = INV4PI
                * (-3.0 * w0 * (px + py + 2.0 * pz) / (32.0 * z.powi(3))
                    + 3.0 * a * a * w0 / (64.0 * z) * (px + 3.0 * py + 64.0 * w0 * z * ln / 3.0 * pz)
                    + 3.0 * a * w0 / (64.0 * z) * 2.0 * w / z);
            if iso {
                variants.push(Variant {
                    name: "isotropic",
                    total: -INV4PI * (w0 / (8.0 * z.powi(3)) - w0 * a / (32.0 * z * z)),
                });
            }
            variants.push(Variant {
                name: "vf+rr",
                total: vf + rr,
            });
            (total, Some(vf), Some(rr))
        }

        Regime::LowAIntermediate | Regime::LowALong => {
            // a²·w/(az) is written as a·w/z so the a → 0 limit is exact.
            let smooth = 3.0 / (8.0 * PI * z.powi(4)) * (px + py + pz)
                + 3.0 / (8.0 * PI * w0 * w0 * z.powi(4))
                    * (a * a * (2.0 * px / (w0 * w0 * z * z) - py - pz) - a * w / z);
            let total = -INV4PI * smooth;
            if iso {
                variants.push(Variant {
                    name: "isotropic",
                    total: -INV4PI * (3.0 / (8.0 * PI * z.powi(4)) - a / (8.0 * PI * w0 * w0 * z.powi(5))),
                });
            }
            if regime == Regime::LowAIntermediate {
                let (c, s) = ((2.0 * w0 * z).cos(), (2.0 * w0 * z).sin());
                let osc = (3.0 * w0.powi(3) / (8.0 * z) * (px + py - pz / (2.0 * z * z * w0 * w0))
                    - 3.0 * w0.powi(3) * z / 16.0 * (a * a * (3.0 * px + py - 2.0 * pz) - 2.0 * a * w / z))
                    * c
                    - (3.0 * w0 * w0 * (px + py + 2.0 * pz) / (16.0 * z * z)
                        + 3.0 * w0 * w0 / 16.0 * (a * a * (2.0 * px + py - 3.0 * pz) - a * w / z))
                        * s;
                let vf = -INV4PI * (osc + smooth);
                let rr = INV4PI * osc;
                variants.push(Variant {
                    name: "vf+rr",
                    total: vf + rr,
                });
                (total, Some(vf), Some(rr))
            } else {
                (total, None, None)
            }
        }

        Regime::HighAShort => {
            let vf = INV4PI * 3.0 * a / (32.0 * PI * z.powi(3)) * (px + py + 2.0 * pz - a * z * w);
            let rr = -INV4PI
                * (3.0 * w0 * (px + py + 2.0 * pz) / (32.0 * z.powi(3))
                    - 3.0 * w0 * a * w / (32.0 * z * z)
                    - 3.0 * w0 * a * a * (px + 3.0 * py) / (64.0 * z)
                    - 45.0 * w0 * a.powi(4) * z * pz / 128.0);
            // Vacuum fluctuations dominate the total here.
            let total = vf;
            if iso {
                variants.push(Variant {
                    name: "isotropic",
                    total: INV4PI * (a / (8.0 * PI * z.powi(3)) - a * a / (32.0 * PI * z * z)),
                });
            }
            variants.push(Variant {
                name: "vf+rr",
                total: vf + rr,
            });
            (total, Some(vf), Some(rr))
        }

        Regime::HighAFarIntermediate | Regime::HighAFarLong => {
            let l = (2.0 * a * z).ln();
            let th = 2.0 * w0 / a * l;
            let (c, s) = (th.cos(), th.sin());
            let q = 1.0 / (4.0 * w0 * w0 * a * a * z.powi(4));
            let b = 1.0 - 2.0 * l;
            let yzx = py + pz + w / (a * z);

            let vf_full = -INV4PI
                * (-3.0 * px / (8.0 * PI * z.powi(4))
                    * ((1.0 - w0 * w0 / (a * a)) * c + 2.0 * w0 / a * s - 1.0)
                    + 3.0 * w0 * w0 * py / (8.0 * PI * z * z)
                        * ((1.0 - q) * c - a / w0 * s + 1.0 / (a * a * z * z) + q)
                    + 3.0 * w0 * w0 * pz / (8.0 * PI * z * z)
                        * ((1.0 - 5.0 * q) * c - a / w0 * s + 1.0 / (a * a * z * z) + 5.0 * q)
                    + 3.0 * w0 * w0 * w / (8.0 * PI * a * z.powi(3))
                        * (c - a / w0 * s - 1.0 / (w0 * w0 * z * z)));
            let rr_full = INV4PI
                * (-3.0 * w0 * px / (8.0 * a * z.powi(4)) * ((1.0 - w0 * w0 / (a * a)) * c + 2.0 * w0 / a * s)
                    + 3.0 * w0.powi(3) * py / (8.0 * a * z * z) * ((1.0 - q) * c - a / w0 * s)
                    + 3.0 * w0.powi(3) * pz / (8.0 * a * z * z) * ((1.0 - 5.0 * q) * c - a / w0 * s)
                    + 3.0 * w0.powi(3) * w / (8.0 * a * a * z.powi(3)) * (c - a / w0 * s));

            let vf = -INV4PI
                * (3.0 * w0 * w0 / (8.0 * PI * a * a * z.powi(4)) * (1.0 - 4.0 * l + 2.0 * l * l) * px
                    + 3.0 * w0 * w0 / (8.0 * PI * z * z) * b * yzx);
            let rr = INV4PI
                * (-3.0 * w0 / (8.0 * a * z.powi(4)) * px
                    + 3.0 * w0.powi(3) / (8.0 * a * z * z) * b * yzx
                    - 3.0 * w0 / (32.0 * a.powi(3) * z.powi(6)) * (py + 5.0 * pz - 4.0 * a * z * w));
            let printed = -INV4PI
                * (3.0 * w0 / (8.0 * a * z.powi(4)) * px + 3.0 * w0 * w0 / (8.0 * PI * z * z) * b * yzx);

            variants.push(Variant {
                name: "full_phase_vf+rr",
                total: vf_full + rr_full,
            });
            if th >= 1.0 / DEFAULT_STRICTNESS {
                flags.push("small-phase condition 2(ω₀/a)ln(2az) ≪ 1 not met");
            }
            if regime == Regime::HighAFarLong {
                variants.push(Variant {
                    name: "vf+rr",
                    total: vf + rr,
                });
                (printed, Some(vf), Some(rr))
            } else {
                // With ω₀z ≪ 1 the vf/rr ratio of the y,z parts is
                // indeterminate; no dominance is assumed.
                flags.push("no total-dominance claim: total taken as vf + rr");
                variants.push(Variant {
                    name: "long_distance_total",
                    total: printed,
                });
                (vf + rr, Some(vf), Some(rr))
            }
        }

        Regime::NearResNear => {
            let total = -3.0 * w0 / (128.0 * PI) * ((px + py + 2.0 * pz) / z.powi(3) - a / (z * z) * w);
            (total, None, None)
        }

        Regime::NearResFar => {
            let zl = |nbar: f64, phase: f64| {
                let (c, s) = (phase.cos(), phase.sin());
                -3.0 * w0 / (128.0 * PI)
                    * (nbar
                        * ((2.0 * px / (w0.powi(3) * z.powi(6))
                            + 4.0 * w0 * (py + pz) / (z * z)
                            + 4.0 * w / z.powi(3))
                            * c
                            - (8.0 * px / (w0 * z.powi(4)) + 4.0 * w0 * (py + pz) / (z * z) + 4.0 * w / z.powi(3))
                                * s)
                        + 2.0 / (PI * w0 * z.powi(4)) * (2.0 * px + py + pz - w / (w0 * z)))
            };
            let ash = (a * z).asinh();
            let total = zl(thermal_factor(w0, a), 2.0 * w0 / a * ash);
            if a != w0 {
                flags.push("a ≠ ω₀: thermal factor and phase generalized from their a = ω₀ values");
                variants.push(Variant {
                    name: "a_equals_omega0",
                    total: zl(2.0 / (2.0 * PI).exp_m1(), 2.0 * ash),
                });
            }
            (total, None, None)
        }
    };

    Ok(Asymptote {
        regime,
        total,
        vf,
        rr,
        variants,
        flags,
    })
}

/// Evaluates the expansion for `regime` and compares it with the exact total.
pub fn asymptote(
    regime: Regime,
    atom: &AtomSpec,
    kin: &Kinematics,
    settings: &QuadratureSettings,
    strictness: f64,
) -> Result<AsymptoteReport> {
    let asym = asymptote_value(regime, atom, kin)?;
    let exact = shift_total(atom, kin, settings)?;
    let floor = exact.err_est.max(f64::MIN_POSITIVE);
    let rel_deviation = (exact.total_reduced - asym.total).abs() / exact.total_reduced.abs().max(floor);
    Ok(AsymptoteReport {
        regime,
        margins: Margins {
            a_over_omega0: kin.a / atom.omega0,
            az: kin.az(),
            w0z: kin.w0z(atom.omega0),
            depth: regime_depth(regime, atom.omega0, kin.a, kin.z, strictness),
        },
        asymptote_total: asym.total,
        asymptote_vf: asym.vf,
        asymptote_rr: asym.rr,
        exact_total: exact.total_reduced,
        exact_vf: exact.vf_reduced,
        exact_rr: exact.rr_reduced,
        err_est: exact.err_est,
        rel_deviation,
        variants: asym.variants,
        flags: asym.flags,
    })
}

/// Exact-versus-expansion deviations over a grid, sorted by increasing depth.
pub fn deviation_scan(
    regime: Regime,
    atom: &AtomSpec,
    grid: &[Kinematics],
    settings: &QuadratureSettings,
    strictness: f64,
) -> Result<Vec<AsymptoteReport>> {
    let mut out = grid
        .iter()
        .map(|kin| asymptote(regime, atom, kin, settings, strictness))
        .collect::<Result<Vec<_>>>()?;
    out.sort_by(|x, y| x.margins.depth.total_cmp(&y.margins.depth));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::Polarization;
    use approx::assert_relative_eq;

    const S: f64 = DEFAULT_STRICTNESS;

    fn iso() -> AtomSpec {
        AtomSpec::isotropic(1.0).unwrap()
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(1.0, 1e-3, 1e-2, S), Regime::LowAShort);
        assert_eq!(classify(1.0, 1e-3, 1e3, S), Regime::Ambiguous);
        let kin = crate::units::to_natural(1e23, 1e-2).unwrap();
        assert_eq!(classify(1e15, kin.a, kin.z, S), Regime::NearResFar);
        assert_eq!(classify(1.0, 0.0, 1e-3, S), Regime::LowAShort);
        assert_eq!(classify(1.0, 0.0, 1e3, S), Regime::LowAIntermediate);
        assert_eq!(classify(1.0, 100.0, 1e-5, S), Regime::HighAShort);
        assert_eq!(classify(1.0, 100.0, 50.0, S), Regime::HighAFarLong);
        assert_eq!(classify(1.0, 1000.0, 0.05, S), Regime::HighAFarIntermediate);
        assert_eq!(classify(1.0, 1.0, 0.01, S), Regime::NearResNear);
        assert_eq!(classify(1.0, 1e-3, 3e4, S), Regime::LowALong);
        assert_eq!(classify(1.0, 1e-3, 50.0, S), Regime::LowAIntermediate);
    }

    #[test]
    fn unit_point_is_near_res_band_but_ambiguous_regime() {
        let c = classify_full(1.0, 1.0, 1.0, S);
        assert_eq!(c.regime, Regime::Ambiguous);
        assert_eq!(c.band, AccelBand::NearRes);
    }

    #[test]
    fn ambiguous_has_no_expansion() {
        let kin = Kinematics::new(1.0, 1.0).unwrap();
        assert!(matches!(
            asymptote_value(Regime::Ambiguous, &iso(), &kin),
            Err(Error::UnsupportedRegime(_))
        ));
    }

    #[test]
    fn isotropic_forms_agree_with_printed_examples() {
        let (a, z) = (1e-3, 1e-2);
        let kin = Kinematics::new(a, z).unwrap();
        let r = asymptote_value(Regime::LowAShort, &iso(), &kin).unwrap();
        let printed = -INV4PI * (1.0 / (8.0 * z.powi(3)) - a / (32.0 * z * z));
        assert_relative_eq!(r.variants[0].total, printed, max_relative = 1e-14);
        assert!((r.total - printed).abs() < 1e-6 * printed.abs());

        let (a, z) = (1e-3, 100.0);
        let kin = Kinematics::new(a, z).unwrap();
        let r = asymptote_value(Regime::LowALong, &iso(), &kin).unwrap();
        let printed = -INV4PI * (3.0 / (8.0 * PI * z.powi(4)) - a / (8.0 * PI * z.powi(5)));
        assert_relative_eq!(r.variants[0].total, printed, max_relative = 1e-14);

        let (a, z) = (100.0, 1e-5);
        let kin = Kinematics::new(a, z).unwrap();
        let r = asymptote_value(Regime::HighAShort, &iso(), &kin).unwrap();
        let printed = INV4PI * (a / (8.0 * PI * z.powi(3)) - a * a / (32.0 * PI * z * z));
        assert_relative_eq!(r.total, printed, max_relative = 1e-14);
    }

    #[test]
    fn low_a_forms_reduce_to_static_at_zero_acceleration() {
        let atom = AtomSpec::new(1.0, Polarization::new(0.2, 0.3, 0.5).unwrap()).unwrap();
        let z = 1e-2;
        let kin = Kinematics::new(0.0, z).unwrap();
        let r = asymptote_value(Regime::LowAShort, &atom, &kin).unwrap();
        assert_relative_eq!(r.total, -INV4PI * 3.0 * (0.2 + 0.3 + 1.0) / (32.0 * z.powi(3)), max_relative = 1e-14);
        let z = 100.0;
        let kin = Kinematics::new(0.0, z).unwrap();
        let r = asymptote_value(Regime::LowALong, &atom, &kin).unwrap();
        assert_relative_eq!(r.total, -INV4PI * 3.0 / (8.0 * PI * z.powi(4)), max_relative = 1e-14);
    }

    #[test]
    fn near_res_near_leading_term_is_static() {
        let atom = AtomSpec::new(1.0, Polarization::new(0.2, 0.3, 0.5).unwrap()).unwrap();
        let z = 1e-3;
        let kin = Kinematics::new(0.0, z).unwrap();
        let r = asymptote_value(Regime::NearResNear, &atom, &kin).unwrap();
        assert_relative_eq!(r.total, -3.0 / (128.0 * PI) * 1.5 / z.powi(3), max_relative = 1e-14);
    }

    #[test]
    fn near_res_far_generalization_recovers_a_equals_omega0() {
        let kin = Kinematics::new(1.0, 30.0).unwrap();
        let r = asymptote_value(Regime::NearResFar, &iso(), &kin).unwrap();
        assert!(r.flags.is_empty() && r.variants.is_empty());
        let kin = Kinematics::new(0.5, 30.0).unwrap();
        let r = asymptote_value(Regime::NearResFar, &iso(), &kin).unwrap();
        assert_eq!(r.flags.len(), 1);
    }

    #[test]
    fn high_a_far_sign_law_of_expansion() {
        let kin = Kinematics::new(100.0, 50.0).unwrap();
        let x = AtomSpec::new(1.0, Polarization::X).unwrap();
        let y = AtomSpec::new(1.0, Polarization::Y).unwrap();
        assert!(asymptote_value(Regime::HighAFarLong, &x, &kin).unwrap().total < 0.0);
        assert!(asymptote_value(Regime::HighAFarLong, &y, &kin).unwrap().total > 0.0);
    }

    #[test]
    fn deep_low_a_short_deviation() {
        let kin = Kinematics::new(1e-2, 1e-2).unwrap();
        let r = asymptote(Regime::LowAShort, &iso(), &kin, &QuadratureSettings::default(), S).unwrap();
        assert!(r.rel_deviation <= 0.02, "{}", r.rel_deviation);
    }

    #[test]
    fn deviation_scan_sorted_by_depth() {
        let grid: Vec<_> = [1e-1, 1e-2, 1e-3]
            .iter()
            .map(|&z| Kinematics::new(1e-2, z).unwrap())
            .collect();
        let rows = deviation_scan(Regime::LowAShort, &iso(), &grid, &QuadratureSettings::default(), S).unwrap();
        assert!(rows.windows(2).all(|w| w[0].margins.depth <= w[1].margins.depth));
        // Deviation shrinks as the regime deepens.
        assert!(rows.windows(2).all(|w| w[1].rel_deviation <= 1.2 * w[0].rel_deviation));
    }
}
