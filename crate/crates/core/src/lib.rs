//! Position-dependent energy-level shift of a uniformly accelerated
//! two-level atom near an infinite perfectly conducting plane.
//!
//! The shift splits into a vacuum-fluctuation part and a radiation-reaction
//! part, both contracted from closed-form amplitudes `f_ij` and Laplace-type
//! integrals `g_ij`. All quantities are in natural units (c = ħ = 1) and all
//! shifts are reported per static polarizability α₀.

pub mod asymptotic;
pub mod error;
pub mod oracle;
pub mod quad;
pub mod shift;
pub mod structfun;
pub mod units;

pub use error::{Error, Result};
pub use shift::{ComparatorResult, Ratio, ShiftBreakdown};
pub use structfun::{Component, PerComponent, QuadratureSettings, StatFunctions};
pub use units::{AtomSpec, Kinematics, Polarization, UnitMode, UnitSystem, SPEED_OF_LIGHT};

/// Library version, recorded in run metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
