//! Trigonometric polynomials, Chebyshev evaluation in log form, and pointwise evaluators.

mod chebyshev;
mod evaluator;
mod fourier;
mod poly;

pub use chebyshev::{chebyshev_eval, chebyshev_log_eval, chebyshev_offset_eval};
pub use evaluator::{
    counterexample_evaluator, CounterexampleDerivative, CounterexampleQ, PointEvaluator,
};
pub use fourier::{fourier_partial_sum, FourierFit};
pub use poly::TrigPoly;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrigError {
    #[error("argument {x} outside the log-form domain x > 1")]
    Domain { x: f64 },
    #[error("direct evaluation needs |x| <= 2 and n <= 10000 (n = {n}, x = {x})")]
    OutOfRange { n: u64, x: f64 },
    #[error("T_{n}({x}) overflows; use the log form")]
    Overflow { n: u64, x: f64 },
    #[error("need more samples than twice the degree ({samples} samples for degree {degree})")]
    TooFewSamples { samples: usize, degree: usize },
    #[error("spectrum not resolved: top-quarter relative energy {energy:e}")]
    Aliasing { energy: f64 },
}
