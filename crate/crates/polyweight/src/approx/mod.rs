//! How well partial Fourier sums approximate an admissible weight, and when they can stand in
//! for it inside weighted norms.

mod decay;
mod equivalence;

pub use decay::{fourier_decay_report, DecayReport, DecayRow};
pub use equivalence::{norm_equivalence_k, EquivalenceReport};

use serde::Serialize;
use thiserror::Error;

use crate::quad::QuadError;
use crate::trigpoly::{fourier_partial_sum, TrigError, TrigPoly};
use crate::weights::{OmegaWeight, WeightError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ApproxError {
    #[error(transparent)]
    Trig(#[from] TrigError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error("no K up to {k_max} passes; worst log deviation {worst}")]
    NotFound { k_max: u64, worst: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// A smooth periodic function known pointwise with its derivative.
pub trait Periodic: Sync {
    fn value(&self, t: f64) -> f64;
    fn derivative(&self, t: f64) -> f64;
    /// Points where the function vanishes to high order; checks are densified there.
    fn zeros(&self) -> Vec<f64>;
}

impl Periodic for OmegaWeight {
    fn value(&self, t: f64) -> f64 {
        self.log_value(t).exp()
    }
    fn derivative(&self, t: f64) -> f64 {
        let v = self.value(t);
        if v == 0.0 {
            return 0.0;
        }
        self.log_derivative(t).map_or(0.0, |d| v * d)
    }
    fn zeros(&self) -> Vec<f64> {
        self.g.zeros().to_vec()
    }
}

impl Periodic for TrigPoly {
    fn value(&self, t: f64) -> f64 {
        self.eval(t)
    }
    fn derivative(&self, t: f64) -> f64 {
        TrigPoly::derivative(self).eval(t)
    }
    fn zeros(&self) -> Vec<f64> {
        Vec::new()
    }
}

const MIN_SAMPLES: usize = 1 << 16;
const MAX_SAMPLES: usize = 1 << 22;

/// Degree-`n` partial Fourier sum from equispaced samples, doubling the sample count until the
/// top of the sampled spectrum is clean.
pub(crate) fn sampled_partial_sum(
    f: &(impl Fn(f64) -> f64 + ?Sized),
    n: usize,
) -> Result<TrigPoly, ApproxError> {
    let mut len = MIN_SAMPLES;
    while len / 2 <= 4 * n {
        len *= 2;
    }
    loop {
        let step = crate::logmath::TAU / len as f64;
        let samples: Vec<f64> = (0..len)
            .map(|j| f(-std::f64::consts::PI + step * j as f64))
            .collect();
        let fit = fourier_partial_sum(&samples, n)?;
        if !fit.aliased() || len >= MAX_SAMPLES {
            return Ok(fit.check()?.poly);
        }
        len *= 2;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartialSumError {
    /// `log max |f - f_n|`, `-inf` at the rounding floor.
    pub e0: f64,
    /// `log max |f' - f_n'|`.
    pub e1: f64,
}

/// Sup-norm errors of the degree-`n` partial sum and of its derivative, over `16n` equispaced
/// points plus points graded toward the zeros of `f`.
pub fn partial_sum_error<F: Periodic + ?Sized>(
    f: &F,
    n: usize,
) -> Result<PartialSumError, ApproxError> {
    if n < 8 {
        return Err(ApproxError::InvalidParameter(format!("degree {n} below 8")));
    }
    let fit = sampled_partial_sum(&|t| f.value(t), n)?;
    let derivative = fit.derivative();
    let count = 16 * n;
    let step = crate::logmath::TAU / count as f64;
    let mut points: Vec<f64> = (0..count)
        .map(|j| -std::f64::consts::PI + step * j as f64)
        .collect();
    for z in f.zeros() {
        for j in 1..=40 {
            let d = step * 0.5f64.powi(j);
            points.extend([z - d, z + d]);
        }
    }
    let floor = |err: f64, scale: f64| {
        if err <= 64.0 * f64::EPSILON * scale {
            f64::NEG_INFINITY
        } else {
            err.ln()
        }
    };
    let (mut err0, mut err1, mut scale0, mut scale1) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for &t in &points {
        let (v, d) = (f.value(t), f.derivative(t));
        err0 = err0.max((v - fit.eval(t)).abs());
        err1 = err1.max((d - derivative.eval(t)).abs());
        scale0 = scale0.max(v.abs());
        scale1 = scale1.max(d.abs());
    }
    Ok(PartialSumError {
        e0: floor(err0, scale0),
        e1: floor(err1, scale1 * n as f64),
    })
}
