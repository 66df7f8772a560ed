//! Weight catalog, scale functions, singular-set geometry and doubling testers.

mod catalog;
mod intervals;
mod omega;
mod parse;
mod scale;
mod testers;

pub use catalog::{FFamily, FSpec, GKind, GSpec, SineForm};
pub use intervals::{singular_set, widened_singular_set, IntervalSet};
pub use omega::{CompositeWeight, DoublingFactor, OmegaWeight};
pub use parse::parse_weight;
pub use scale::{
    envelope_holds, lemma0_sum, log_grid, optimal_fourier_k, sandwich_holds, solve_x0, solve_x1,
    tail_sum_check, EmpiricalConstants, OptimalK, TailSum,
};
pub use testers::{astar_constant, doubling_ratio};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WeightError {
    #[error("no bracket for {what} at target {target}")]
    NoBracket { what: &'static str, target: f64 },
    #[error("derivative requested at a zero of g (t = {t})")]
    AtSingularity { t: f64 },
    #[error("exact enumeration overflows for k = {k}")]
    Overflow { k: u32 },
    #[error("no admissible value below the scan cap {cap}")]
    NotFound { cap: u64 },
    #[error("weight integral vanishes at working precision")]
    Degenerate,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("weight spec, column {column}: {message}")]
    Parse { column: usize, message: String },
}

/// Anything that can be integrated against: evaluated in the log domain.
pub trait Weight: Sync {
    /// `log omega(t)`, `-inf` where the weight vanishes.
    fn log_weight(&self, t: f64) -> f64;
    /// An upper bound of `log omega` over `[t0, t1]`.
    fn log_weight_bound(&self, t0: f64, t1: f64) -> f64;
    /// Points in `[-pi, pi)` where the weight vanishes or blows up.
    fn singular_points(&self) -> Vec<f64>;
}

impl<W: Weight + ?Sized> Weight for &W {
    fn log_weight(&self, t: f64) -> f64 {
        (**self).log_weight(t)
    }
    fn log_weight_bound(&self, t0: f64, t1: f64) -> f64 {
        (**self).log_weight_bound(t0, t1)
    }
    fn singular_points(&self) -> Vec<f64> {
        (**self).singular_points()
    }
}

/// `omega^{power}`, formed by scaling log values.
#[derive(Debug, Clone)]
pub struct PoweredWeight<W> {
    pub inner: W,
    pub power: f64,
}

impl<W: Weight> Weight for PoweredWeight<W> {
    fn log_weight(&self, t: f64) -> f64 {
        let v = self.inner.log_weight(t);
        if v == f64::NEG_INFINITY {
            v
        } else {
            self.power * v
        }
    }
    fn log_weight_bound(&self, t0: f64, t1: f64) -> f64 {
        if self.power >= 0.0 {
            self.power * self.inner.log_weight_bound(t0, t1)
        } else {
            f64::INFINITY
        }
    }
    fn singular_points(&self) -> Vec<f64> {
        self.inner.singular_points()
    }
}

pub(crate) fn dedup_angles(mut points: Vec<f64>) -> Vec<f64> {
    points.sort_by(f64::total_cmp);
    points.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    if points.len() > 1
        && (points[points.len() - 1] - points[0] - crate::logmath::TAU).abs() < 1e-14
    {
        points.pop();
    }
    points
}
