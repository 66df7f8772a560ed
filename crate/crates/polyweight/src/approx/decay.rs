use serde::Serialize;

use super::ApproxError;
use crate::logmath::log_add_exp;
use crate::quad::{fourier_coefficient_log, QuadConfig};
use crate::weights::{solve_x1, CompositeWeight, FSpec, OmegaWeight};

/// Coefficients below `exp(-700)` are past double precision and left out of the fit.
const CENSOR_LOG: f64 = -700.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayRow {
    pub n: u64,
    /// `log |omega_hat_n|`.
    pub coeff_log: f64,
    /// `n x_1(n)`.
    pub n_x1: f64,
    pub censored: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayReport {
    pub rows: Vec<DecayRow>,
    /// Largest `c` with `log |omega_hat_n| <= -c n x_1(n)` on the window.
    pub fitted_c: f64,
    /// First and last degree of the fit window.
    pub window: (u64, u64),
    pub pass: bool,
}

impl DecayReport {
    /// Whether `log |omega_hat_n| <= -c n x_1(n)` on every uncensored row.
    pub fn holds_with(&self, c: f64) -> bool {
        self.rows
            .iter()
            .filter(|r| !r.censored)
            .all(|r| r.coeff_log <= -c * r.n_x1)
    }
}

/// Degrees `n_min * 2^(j/2)` up to `n_max`, rounded.
fn geometric_grid(n_min: u64, n_max: u64) -> Vec<u64> {
    let mut grid: Vec<u64> = (0..)
        .map(|j| (n_min as f64 * 2f64.powf(0.5 * j as f64)).round() as u64)
        .take_while(|&n| n <= n_max)
        .collect();
    grid.dedup();
    grid
}

pub(crate) fn report_from(
    f: &FSpec,
    grid: &[u64],
    coeff_log: impl Fn(u64) -> f64 + Sync,
) -> Result<DecayReport, ApproxError> {
    use rayon::prelude::*;
    let rows: Result<Vec<DecayRow>, ApproxError> = grid
        .par_iter()
        .map(|&n| {
            let c = coeff_log(n);
            let n_x1 = n as f64 * solve_x1(f, n as f64)?;
            Ok(DecayRow {
                n,
                coeff_log: c,
                n_x1,
                censored: c < CENSOR_LOG,
            })
        })
        .collect();
    let rows = rows?;
    let half = rows.len() / 2;
    let window_rows = &rows[half..];
    let fitted_c = window_rows
        .iter()
        .filter(|r| !r.censored)
        .map(|r| -r.coeff_log / r.n_x1)
        .fold(f64::INFINITY, f64::min);
    let fitted_c = if fitted_c == f64::INFINITY {
        f64::NAN
    } else {
        fitted_c
    };
    let window = (
        window_rows.first().map_or(0, |r| r.n),
        window_rows.last().map_or(0, |r| r.n),
    );
    let pass = fitted_c > 0.0
        && window_rows
            .iter()
            .filter(|r| !r.censored)
            .all(|r| r.coeff_log <= -fitted_c * r.n_x1);
    Ok(DecayReport {
        rows,
        fitted_c,
        window,
        pass,
    })
}

/// Fourier coefficient magnitudes on a geometric grid of degrees in `[n_min, n_max]`, with the
/// decay constant fitted on the upper half of the grid.
pub fn fourier_decay_report(
    w: &OmegaWeight,
    n_min: u64,
    n_max: u64,
) -> Result<DecayReport, ApproxError> {
    if n_min < 16 || n_max > 4096 || n_min > n_max {
        return Err(ApproxError::InvalidParameter(format!(
            "need 16 <= n_min <= n_max <= 4096, got {n_min}, {n_max}"
        )));
    }
    let composite = CompositeWeight::from(w.clone());
    let cfg = QuadConfig::default().with_tolerance(1e-10);
    report_from(&w.f, &geometric_grid(n_min, n_max), |n| {
        let c = fourier_coefficient_log(&composite, n, &cfg);
        0.5 * log_add_exp(2.0 * c.cos.log_abs, 2.0 * c.sin.log_abs)
    })
}
