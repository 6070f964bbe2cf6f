use thiserror::Error;

use crate::structfun::Component;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input parameter is non-finite or outside its physical range.
    #[error("domain error: `{field}` = {value} ({reason})")]
    Domain {
        field: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid polarization weights: {0}")]
    Polarization(String),

    /// Adaptive quadrature ran out of subdivisions before reaching the
    /// requested tolerance. Carries the best estimate obtained.
    #[error("quadrature did not converge: estimate {estimate:e} with error {err_est:e} after {subdivisions} subdivisions")]
    Accuracy {
        estimate: f64,
        err_est: f64,
        subdivisions: usize,
    },

    #[error("component {component}: {source}")]
    InComponent {
        component: Component,
        #[source]
        source: Box<Error>,
    },

    #[error("integrand is not finite at u = {at:e}")]
    NonFinite { at: f64 },

    #[error("deadline exceeded")]
    DeadlineExceeded,

    /// Two algebraically identical routes disagree beyond tolerance.
    #[error("internal consistency violated: {what} (relative mismatch {mismatch:e})")]
    Consistency { what: &'static str, mismatch: f64 },

    /// A brute-force oracle would need more work than its budget allows.
    #[error("oracle budget exceeded: {needed} intervals needed, {allowed} allowed")]
    Budget { needed: usize, allowed: usize },

    #[error("no asymptotic expansion applies to regime {0}")]
    UnsupportedRegime(&'static str),
}

impl Error {
    pub(crate) fn domain(field: &'static str, value: f64, reason: &'static str) -> Self {
        Error::Domain {
            field,
            value,
            reason,
        }
    }

    pub(crate) fn in_component(self, component: Component) -> Self {
        Error::InComponent {
            component,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
