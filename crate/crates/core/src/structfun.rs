//! Boundary-dependent statistical-function amplitudes of the accelerated atom.
//!
//! Every amplitude scales as `z⁻³` times a function of the two dimensionless
//! groups `α = a z` and `β = ω₀ z`, so all evaluation happens in reduced form
//! with `u = z v`:
//!
//! * `f_ij` are closed forms oscillating with the phase
//!   `Φ = (2β/α)·asinh(α)`;
//! * `g_ij` are Laplace-weighted integrals of a kernel with period `2π/α` in
//!   `v`. Dividing numerator and denominator by `α⁶` with `σ = sin(αv/2)/α`
//!   makes the kernels scale free, e.g.
//!   `g_xx z³ = (4/π) ∫₀^∞ (σ² − 1)/(σ² + 1)³ e^{−βv} dv`,
//!   and the static limit is simply `σ → v/2`.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{Estimate, Integrator};
use crate::units::check_positive;

/// Below this `a z` the phase uses its Taylor series.
pub const PHASE_SERIES_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Component {
    Xx,
    Yy,
    Zz,
    Xz,
}

impl Component {
    pub const ALL: [Component; 4] = [Component::Xx, Component::Yy, Component::Zz, Component::Xz];

    pub fn as_str(&self) -> &'static str {
        match self {
            Component::Xx => "xx",
            Component::Yy => "yy",
            Component::Zz => "zz",
            Component::Xz => "xz",
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One value per statistical-function component.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PerComponent<T> {
    pub xx: T,
    pub yy: T,
    pub zz: T,
    pub xz: T,
}

impl<T: Copy> PerComponent<T> {
    pub fn get(&self, c: Component) -> T {
        match c {
            Component::Xx => self.xx,
            Component::Yy => self.yy,
            Component::Zz => self.zz,
            Component::Xz => self.xz,
        }
    }

    pub fn try_from_fn<F>(mut f: F) -> Result<Self>
    where
        F: FnMut(Component) -> Result<T>,
    {
        Ok(PerComponent {
            xx: f(Component::Xx)?,
            yy: f(Component::Yy)?,
            zz: f(Component::Zz)?,
            xz: f(Component::Xz)?,
        })
    }

    pub fn from_fn<F: FnMut(Component) -> T>(mut f: F) -> Self {
        PerComponent {
            xx: f(Component::Xx),
            yy: f(Component::Yy),
            zz: f(Component::Zz),
            xz: f(Component::Xz),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSettings {
    pub rel_tol: f64,
    /// Absolute floor on the reduced (scale-free) integrals.
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Direct truncated quadrature replaces period reduction once
    /// `2πω₀/a` exceeds this value.
    pub small_a_threshold: f64,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        QuadratureSettings {
            rel_tol: 1e-10,
            abs_tol: 1e-300,
            max_subdivisions: 2000,
            small_a_threshold: 500.0,
        }
    }
}

impl QuadratureSettings {
    pub fn validate(&self) -> Result<()> {
        check_positive("rel_tol", self.rel_tol)?;
        check_positive("abs_tol", self.abs_tol)?;
        check_positive("small_a_threshold", self.small_a_threshold)?;
        if self.max_subdivisions < 50 {
            return Err(Error::domain(
                "max_subdivisions",
                self.max_subdivisions as f64,
                "must be at least 50",
            ));
        }
        Ok(())
    }

    fn integrator(&self) -> Integrator {
        Integrator::new(self.rel_tol, self.abs_tol, self.max_subdivisions)
    }
}

/// The eight statistical-function values plus the thermal-like factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatFunctions {
    pub f: PerComponent<f64>,
    pub g: PerComponent<f64>,
    /// `2/(e^{2πω₀/a} − 1)`.
    pub nbar2: f64,
    /// Estimated absolute error of each `g` value.
    pub tol_achieved: PerComponent<f64>,
}

/// Oscillation phase `(2β/α)·asinh(α)`, continuous through `α = 0`.
pub fn phase(alpha: f64, beta: f64) -> f64 {
    if alpha < PHASE_SERIES_THRESHOLD {
        phase_series(alpha, beta)
    } else {
        2.0 * beta * alpha.asinh() / alpha
    }
}

pub(crate) fn phase_series(alpha: f64, beta: f64) -> f64 {
    let a2 = alpha * alpha;
    2.0 * beta * (1.0 - a2 / 6.0 + 3.0 * a2 * a2 / 40.0)
}

/// `z³ f_ij` as a function of `α = a z`, `β = ω₀ z`.
pub fn f_reduced(comp: Component, alpha: f64, beta: f64) -> f64 {
    let s = alpha * alpha;
    let b2 = beta * beta;
    let (sin, cos) = phase(alpha, beta).sin_cos();
    let q = 1.0 + s;
    match comp {
        Component::Xx => {
            (4.0 * b2 * q - 4.0 * s * s - 2.0 * s - 1.0) / q.powf(2.5) * cos
                - 2.0 * beta * (1.0 + 4.0 * s) / (q * q) * sin
        }
        Component::Yy => {
            (4.0 * b2 * q - 1.0) / q.powf(1.5) * cos - 2.0 * beta * (1.0 + 2.0 * s) / q * sin
        }
        Component::Zz => {
            -(2.0 + s * (5.0 - 4.0 * b2 * q)) / q.powf(2.5) * cos
                - 2.0 * beta * (2.0 + s + 2.0 * s * s) / (q * q) * sin
        }
        Component::Xz => {
            alpha * (1.0 + 4.0 * s + 4.0 * b2 * q) / q.powf(2.5) * cos
                + 2.0 * alpha * beta * (1.0 - 2.0 * s) / (q * q) * sin
        }
    }
}

/// Closed-form `f_ij(ω₀, z, a)` in natural units of time⁻³.
pub fn f_component(comp: Component, omega0: f64, z: f64, a: f64) -> Result<f64> {
    check_inputs(omega0, z, a)?;
    Ok(f_reduced(comp, a * z, omega0 * z) / (z * z * z))
}

/// Scale-free g kernel at reduced time `v` (without the Laplace weight).
pub fn g_kernel(comp: Component, alpha: f64, v: f64) -> f64 {
    let sigma = if alpha == 0.0 {
        0.5 * v
    } else {
        (0.5 * alpha * v).sin() / alpha
    };
    let s2 = sigma * sigma;
    let d = (s2 + 1.0).powi(3);
    match comp {
        Component::Xx => 4.0 / PI * (s2 - 1.0) / d,
        Component::Yy => 4.0 / PI * (s2 - (alpha * v).cos()) / d,
        Component::Zz => -4.0 / PI * (s2 + (alpha * v).cos()) / d,
        Component::Xz => 8.0 * alpha / PI * s2 / d,
    }
}

/// Geometric ladder `start, 2·start, 4·start, …` strictly below `end`.
fn ladder(start: f64, end: f64) -> impl Iterator<Item = f64> {
    std::iter::successors(Some(start), |x| Some(2.0 * x)).take_while(move |&x| x < end)
}

/// Reduced `z³ g_ij` with its absolute error estimate.
pub fn g_reduced(
    comp: Component,
    alpha: f64,
    beta: f64,
    settings: &QuadratureSettings,
) -> Result<Estimate> {
    settings.validate()?;
    if alpha == 0.0 {
        return g_static_reduced(comp, beta, settings);
    }
    let period = 2.0 * PI / alpha;
    let integrand = |v: f64| g_kernel(comp, alpha, v) * (-beta * v).exp();
    // Peak half-width is ~2 in v; the Laplace weight decays on 1/β.
    let peak = 0.25_f64.min(0.25 * period);
    let decay = 0.25 / beta;

    if beta * period > settings.small_a_threshold {
        let v_cut = (settings.rel_tol.recip().ln() / beta).min(0.5 * period);
        let mut pts = vec![0.0, v_cut];
        pts.extend(ladder(peak.min(decay), v_cut));
        let est = settings.integrator().integrate(integrand, &pts)?;
        let sigma_c = (0.5 * alpha * v_cut).sin() / alpha;
        let kernel_bound = match comp {
            Component::Xz => 8.0 * alpha / PI,
            _ => 4.0 / PI,
        } / (1.0 + sigma_c * sigma_c).powi(2);
        let tail = kernel_bound * (-beta * v_cut).exp() / beta;
        return Ok(Estimate {
            err_est: est.err_est + tail,
            ..est
        });
    }

    let half = 0.5 * period;
    let mut pts = vec![0.0, half, period];
    for x in ladder(peak, half) {
        pts.push(x);
        pts.push(period - x);
    }
    pts.extend(ladder(decay, half));
    let one = settings.integrator().integrate(integrand, &pts)?;
    let scale = -(-beta * period).exp_m1();
    Ok(Estimate {
        value: one.value / scale,
        err_est: one.err_est / scale,
        intervals: one.intervals,
    })
}

/// Period-reduced integral `g_ij(ω₀, z, a)` for `a > 0`, returning
/// `(value, err_est)` in natural units of time⁻³.
pub fn g_component(
    comp: Component,
    omega0: f64,
    z: f64,
    a: f64,
    settings: &QuadratureSettings,
) -> Result<(f64, f64)> {
    check_inputs(omega0, z, a)?;
    if a == 0.0 {
        return Err(Error::domain(
            "a",
            a,
            "g_component needs a > 0; use g_static_limit",
        ));
    }
    let est = g_reduced(comp, a * z, omega0 * z, settings).map_err(|e| e.in_component(comp))?;
    let z3 = z * z * z;
    Ok((est.value / z3, est.err_est / z3))
}

/// Reduced static limit `z³ g_ij(ω₀, z, 0)`.
///
/// With `v = 2t` the kernels become `(8/π)(t² − 1)/(t² + 1)³` (xx, yy) and
/// `−(8/π)/(t² + 1)²` (zz) under the weight `e^{−2βt}`. The tail `t > 1` is
/// folded onto `(0, 1]` via `t = 1/s`.
pub fn g_static_reduced(comp: Component, beta: f64, settings: &QuadratureSettings) -> Result<Estimate> {
    settings.validate()?;
    let (near, far): (fn(f64) -> f64, fn(f64) -> f64) = match comp {
        Component::Xz => {
            return Ok(Estimate {
                value: 0.0,
                err_est: 0.0,
                intervals: 0,
            })
        }
        Component::Xx | Component::Yy => (
            |t| (t * t - 1.0) / (t * t + 1.0).powi(3),
            |s| s * s * (1.0 - s * s) / (1.0 + s * s).powi(3),
        ),
        Component::Zz => (
            |t| -1.0 / (t * t + 1.0).powi(2),
            |s| -s * s / (1.0 + s * s).powi(2),
        ),
    };
    let integrand = |x: f64| {
        // x ∈ [0, 1]: near region t = x; x ∈ (1, 2]: far region t = 1/(2 − x)
        if x <= 1.0 {
            near(x) * (-2.0 * beta * x).exp()
        } else {
            let s = 2.0 - x;
            if s <= 0.0 {
                0.0
            } else {
                far(s) * (-2.0 * beta / s).exp()
            }
        }
    };
    let mut pts = vec![0.0, 1.0, 2.0];
    pts.extend(ladder(0.125 / beta.max(1.0), 1.0));
    let est = settings.integrator().integrate(integrand, &pts)?;
    let k = 8.0 / PI;
    Ok(Estimate {
        value: k * est.value,
        err_est: k * est.err_est,
        intervals: est.intervals,
    })
}

/// `g_ij(ω₀, z, a → 0)` in natural units; identically zero for xz.
pub fn g_static_limit(
    comp: Component,
    omega0: f64,
    z: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    g_static_with_err(comp, omega0, z, settings).map(|(v, _)| v)
}

pub(crate) fn g_static_with_err(
    comp: Component,
    omega0: f64,
    z: f64,
    settings: &QuadratureSettings,
) -> Result<(f64, f64)> {
    check_inputs(omega0, z, 0.0)?;
    let est = g_static_reduced(comp, omega0 * z, settings).map_err(|e| e.in_component(comp))?;
    let z3 = z * z * z;
    Ok((est.value / z3, est.err_est / z3))
}

/// Planck-like factor `2/(e^{2πω₀/a} − 1)`, zero at `a = 0`.
pub fn thermal_factor(omega0: f64, a: f64) -> f64 {
    if a <= 0.0 {
        return 0.0;
    }
    2.0 / (2.0 * PI * omega0 / a).exp_m1()
}

pub fn stat_functions(
    omega0: f64,
    z: f64,
    a: f64,
    settings: &QuadratureSettings,
) -> Result<StatFunctions> {
    check_inputs(omega0, z, a)?;
    settings.validate()?;
    let alpha = a * z;
    let beta = omega0 * z;
    let z3 = z * z * z;
    let f = PerComponent::from_fn(|c| f_reduced(c, alpha, beta) / z3);
    let g_est = PerComponent::try_from_fn(|c| {
        if a == 0.0 {
            g_static_reduced(c, beta, settings)
        } else {
            g_reduced(c, alpha, beta, settings)
        }
        .map_err(|e| e.in_component(c))
    })?;
    Ok(StatFunctions {
        f,
        g: PerComponent::from_fn(|c| g_est.get(c).value / z3),
        nbar2: thermal_factor(omega0, a),
        tol_achieved: PerComponent::from_fn(|c| g_est.get(c).err_est / z3),
    })
}

fn check_inputs(omega0: f64, z: f64, a: f64) -> Result<()> {
    check_positive("omega0", omega0)?;
    check_positive("z", z)?;
    if !a.is_finite() || a < 0.0 {
        return Err(Error::domain("a", a, "must be finite and non-negative"));
    }
    Ok(())
}
