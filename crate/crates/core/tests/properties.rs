use std::f64::consts::PI;

use accelshift::asymptotic::{asymptote_value, classify_full, regime_depth, Regime, DEFAULT_STRICTNESS};
use accelshift::shift::{self, prefactor, ShiftBreakdown, shift_static, shift_total, thermal_asymptote_longdist};
use accelshift::structfun::{f_component, g_component, phase, stat_functions};
use accelshift::units::{dimensionless_groups_si, to_natural};
use accelshift::{AtomSpec, Component, Kinematics, Polarization, QuadratureSettings};
use proptest::prelude::*;

fn settings() -> QuadratureSettings {
    QuadratureSettings::default()
}

fn log_uniform(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo.log10()..hi.log10()).prop_map(|e| 10f64.powf(e))
}

fn polarization() -> impl Strategy<Value = Polarization> {
    (0.0..1.0f64, 0.0..1.0f64, 0.0..1.0f64)
        .prop_filter("nonzero", |(x, y, z)| x + y + z > 1e-3)
        .prop_map(|(x, y, z)| {
            let s = x + y + z;
            Polarization::new(x / s, y / s, z / s).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn stat_functions_finite(az in log_uniform(1e-4, 1e2), w0z in log_uniform(1e-3, 1e2)) {
        let st = stat_functions(1.0, w0z, az / w0z, &settings()).unwrap();
        for c in Component::ALL {
            prop_assert!(st.f.get(c).is_finite());
            prop_assert!(st.g.get(c).is_finite());
            prop_assert!(st.tol_achieved.get(c) >= 0.0);
        }
        prop_assert!(st.nbar2 >= 0.0 && st.nbar2.is_finite());
    }

    #[test]
    fn cross_terms_vanish_without_acceleration(w0z in log_uniform(1e-3, 1e3)) {
        let st = stat_functions(1.0, w0z, 0.0, &settings()).unwrap();
        prop_assert_eq!(st.f.xz, 0.0);
        prop_assert_eq!(st.g.xz, 0.0);
        prop_assert_eq!(st.nbar2, 0.0);
        let scale = st.f.xx.abs().max(1.0 / w0z.powi(3));
        prop_assert!((st.f.xx - st.f.yy).abs() <= 1e-12 * scale);
    }

    #[test]
    fn additivity_identity(
        az in log_uniform(1e-3, 1e2),
        w0z in log_uniform(1e-2, 1e2),
        pol in polarization(),
    ) {
        let atom = AtomSpec::new(1.0, pol).unwrap();
        let kin = Kinematics::new(az / w0z, w0z).unwrap();
        let b = shift_total(&atom, &kin, &settings()).unwrap();
        let scale = b.total_reduced.abs().max(b.vf_reduced.abs()).max(b.rr_reduced.abs());
        prop_assert!((b.vf_reduced + b.rr_reduced - b.total_reduced).abs() <= 1e-12 * scale);
        prop_assert!((b.total_reduced + prefactor(1.0) * b.bracket).abs() <= 1e-15 * scale);
    }

    #[test]
    fn superposition_of_basis_contractions(
        az in log_uniform(1e-2, 1e1),
        w0z in log_uniform(1e-2, 1e1),
        pol in polarization(),
    ) {
        let kin = Kinematics::new(az / w0z, w0z).unwrap();
        let total = |p: Polarization| shift_total(&AtomSpec::new(1.0, p).unwrap(), &kin, &settings()).unwrap();
        let b = total(pol);
        let cross = -prefactor(1.0) * (b.stat.nbar2 * b.stat.f.xz - b.stat.g.xz);
        let sum = pol.px() * total(Polarization::X).total_reduced
            + pol.py() * total(Polarization::Y).total_reduced
            + pol.pz() * total(Polarization::Z).total_reduced
            + pol.w_xz() * cross;
        let scale = b.per_component.xx.vf.abs() + b.per_component.yy.vf.abs() + b.per_component.zz.vf.abs()
            + b.per_component.xz.vf.abs() + b.total_reduced.abs();
        prop_assert!((sum - b.total_reduced).abs() <= 1e-12 * scale);
    }

    #[test]
    fn static_isotropic_total_is_negative(w0z in log_uniform(1e-3, 1e3)) {
        let st = shift_static(&AtomSpec::isotropic(1.0).unwrap(), w0z, &settings()).unwrap();
        prop_assert!(st < 0.0);
    }

    #[test]
    fn static_shift_ignores_cross_weight(w0z in log_uniform(1e-2, 1e2), pol in polarization()) {
        // At a = 0 the xz term drops whatever its multiplicity.
        let st = stat_functions(1.0, w0z, 0.0, &settings()).unwrap();
        let one = ShiftBreakdown::from_stat(1.0, &pol, st, 1.0).unwrap();
        let many = ShiftBreakdown::from_stat(1.0, &pol, st, 7.0).unwrap();
        prop_assert_eq!(one.total_reduced, many.total_reduced);
        let atom = AtomSpec::new(1.0, pol).unwrap();
        let stat_path = shift_static(&atom, w0z, &settings()).unwrap();
        prop_assert!((stat_path - one.total_reduced).abs() <= 1e-14 * stat_path.abs());
    }

    #[test]
    fn classification_is_unique(
        ratio in log_uniform(1e-4, 1e4),
        w0z in log_uniform(1e-4, 1e4),
        s in 2.0..200.0f64,
    ) {
        let (w0, a, z) = (1.0, ratio, w0z);
        let c = classify_full(w0, a, z, s);
        let holding: Vec<_> = Regime::DEFINED
            .into_iter()
            .filter(|r| regime_depth(*r, w0, a, z, s) >= s)
            .collect();
        prop_assert!(holding.len() <= 1);
        match holding.first() {
            Some(r) => prop_assert_eq!(c.regime, *r),
            None => prop_assert_eq!(c.regime, Regime::Ambiguous),
        }
    }

    #[test]
    fn low_a_expansions_reduce_to_static(w0z in log_uniform(1e-4, 1e4), pol in polarization()) {
        let atom = AtomSpec::new(1.0, pol).unwrap();
        let kin = Kinematics::new(0.0, w0z).unwrap();
        let z = w0z;
        let short = asymptote_value(Regime::LowAShort, &atom, &kin).unwrap().total;
        let lead = -3.0 / (128.0 * PI) * (pol.px() + pol.py() + 2.0 * pol.pz()) / z.powi(3);
        prop_assert!((short - lead).abs() <= 1e-12 * lead.abs());
        let long = asymptote_value(Regime::LowALong, &atom, &kin).unwrap().total;
        let lead = -1.0 / (4.0 * PI) * 3.0 / (8.0 * PI * z.powi(4));
        prop_assert!((long - lead).abs() <= 1e-12 * lead.abs());
        let near = asymptote_value(Regime::NearResNear, &atom, &kin).unwrap().total;
        prop_assert!((near - short).abs() <= 1e-12 * short.abs());
    }

    #[test]
    fn thermal_asymptote_is_inverse_cube(z in log_uniform(1e-2, 1e4), t in log_uniform(1e-4, 1e-1)) {
        let atom = AtomSpec::isotropic(1.0).unwrap();
        let v1 = thermal_asymptote_longdist(&atom, z, t, DEFAULT_STRICTNESS).value;
        let v2 = thermal_asymptote_longdist(&atom, 2.0 * z, t, DEFAULT_STRICTNESS).value;
        prop_assert!((v1 / v2 - 8.0).abs() < 1e-12);
        prop_assert!(v1 < 0.0);
    }

    #[test]
    fn si_round_trip(a_si in log_uniform(1e-3, 1e30), z_si in log_uniform(1e-12, 1e3)) {
        let (a, z) = to_natural(a_si, z_si).unwrap().to_si();
        prop_assert!((a - a_si).abs() <= 1e-14 * a_si);
        prop_assert!((z - z_si).abs() <= 1e-14 * z_si);
    }

    #[test]
    fn groups_agree_across_units(
        a_si in log_uniform(1e-3, 1e30),
        z_si in log_uniform(1e-12, 1e3),
        w0 in log_uniform(1e6, 1e18),
    ) {
        let kin = to_natural(a_si, z_si).unwrap();
        let (az, w0z) = dimensionless_groups_si(a_si, z_si, w0);
        prop_assert!((kin.az() - az).abs() <= 1e-13 * az);
        prop_assert!((kin.w0z(w0) - w0z).abs() <= 1e-13 * w0z);
    }

    #[test]
    fn polarization_renormalizes(x in 0.0..1.0f64, y in 0.0..1.0f64, jitter in -5e-10..5e-10f64) {
        prop_assume!(x + y <= 1.0);
        let p = Polarization::new(x, y, 1.0 - x - y + jitter).unwrap();
        prop_assert!((p.px() + p.py() + p.pz() - 1.0).abs() < 1e-15);
    }
}

#[test]
fn phase_branches_agree_at_threshold() {
    let alpha = 1e-8f64;
    let beta = 0.7;
    let exact = 2.0 * beta / alpha * alpha.asinh();
    let series = 2.0 * beta * (1.0 - alpha * alpha / 6.0);
    assert!((phase(alpha, beta) - series).abs() <= 1e-13 * series);
    assert!((exact - series).abs() <= 1e-13 * series);
}

#[test]
fn static_continuity_in_acceleration() {
    for w0z in [0.1, 1.0, 10.0] {
        for c in [Component::Xx, Component::Yy, Component::Zz] {
            let (g, _) = g_component(c, 1.0, w0z, 1e-6, &settings()).unwrap();
            let st = stat_functions(1.0, w0z, 0.0, &settings()).unwrap().g.get(c);
            assert!((g - st).abs() <= 1e-4 * st.abs().max(1e-2), "{c} {w0z}: {g} vs {st}");
        }
    }
}

#[test]
fn rr_carries_oscillation_that_total_does_not() {
    // Low acceleration, az ≪ 1 ≪ ω₀z: over one half-period in z the
    // oscillating parts of rr swing while the total stays smooth.
    let atom = AtomSpec::isotropic(1.0).unwrap();
    let a = 1e-3;
    let (mut rr, mut tot) = (Vec::new(), Vec::new());
    for k in 0..=24 {
        let z = 30.0 + PI / 24.0 * k as f64;
        let kin = Kinematics::new(a, z).unwrap();
        rr.push(shift::shift_rr(&atom, &kin).unwrap() * z.powi(4));
        tot.push(shift_total(&atom, &kin, &settings()).unwrap().total_reduced * z.powi(4));
    }
    let swing = |v: &[f64]| v.iter().cloned().fold(f64::MIN, f64::max) - v.iter().cloned().fold(f64::MAX, f64::min);
    assert!(swing(&tot) < 1e-2 * swing(&rr));
}

#[test]
fn f_closed_forms_respect_small_a_limit() {
    for w0z in [0.01, 1.0, 100.0] {
        let f0 = f_component(Component::Xx, 1.0, w0z, 0.0).unwrap();
        let fa = f_component(Component::Xx, 1.0, w0z, 1e-9 / w0z).unwrap();
        assert!((f0 - fa).abs() <= 1e-9 * f0.abs().max(1.0 / w0z.powi(3)));
    }
}
