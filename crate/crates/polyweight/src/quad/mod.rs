//! Weighted norms over the circle or a subset of it, and Fourier coefficients of weights.
//!
//! Everything is computed in the natural-log domain: integrands are factored against a
//! running maximum, so weights as small as `exp(-1e6)` integrate without underflow.

mod engine;
mod fourier;
mod gauss;
mod norms;
mod panels;
mod rule;

pub use fourier::{fourier_coefficient, fourier_coefficient_log, FourierCoefficient};
pub(crate) use gauss::GaussRule;
pub use norms::{weighted_lp_norm, weighted_norm, weighted_sup_norm};
pub use rule::{FixedRule, ScanGrid};

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("integration domain is empty")]
    EmptyDomain,
    #[error("exponent must be positive, got {0}")]
    InvalidExponent(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadConfig {
    /// Panels per full circle before any refinement.
    pub base_panels: usize,
    /// Fixed geometric levels (ratio 1/2) toward each singular point.
    pub refinement_levels: usize,
    /// Gauss–Legendre nodes per panel.
    pub nodes: usize,
    pub tolerance: f64,
    /// Sup-norm scan samples per unit of polynomial degree.
    pub scan_density: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            base_panels: 64,
            refinement_levels: 40,
            nodes: 16,
            tolerance: 1e-9,
            scan_density: 64,
        }
    }
}

impl QuadConfig {
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }
}

/// A weighted (quasi-)norm as a natural log, with the log of its absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogNorm {
    pub log_value: f64,
    pub error_estimate: f64,
    /// `f64::INFINITY` for the sup norm.
    pub p: f64,
    pub argmax: Option<f64>,
    pub converged: bool,
}

impl LogNorm {
    /// Relative error implied by the estimate.
    pub fn relative_error(&self) -> f64 {
        (self.error_estimate - self.log_value).exp()
    }
}

/// `log int_domain exp(f)` with `log_bound(a, b)` an upper envelope of `f` on `[a, b]`, panels
/// graded toward `singular`. Returns `(log value, log error, converged)`.
pub(crate) fn integrate_log(
    log_f: &(dyn Fn(f64) -> f64 + Sync),
    log_bound: &(dyn Fn(f64, f64) -> f64 + Sync),
    domain: &crate::weights::IntervalSet,
    singular: &[f64],
    max_width: f64,
    cfg: &QuadConfig,
) -> (f64, f64, bool) {
    let plan = panels::plan(domain, singular, max_width, cfg);
    let r = engine::Integrator {
        log_integrand: log_f,
        log_bound,
        cfg,
        keep_leaves: false,
    }
    .run(&plan);
    (r.log_value, r.log_error, r.converged)
}
