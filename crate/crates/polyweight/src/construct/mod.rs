//! Weights that decay too fast for a Bernstein inequality, and the polynomials that show it.

mod schedule;
mod staircase;

pub use schedule::{
    divergence_report, divergence_row, neg11_schedule, neg_schedule, DivergenceRow, NegVariant,
    Schedule, ScheduleRow, DEFAULT_K_CAP,
};
pub use staircase::{
    staircase_bernstein_check, staircase_ratio, staircase_weight, Bridge, StaircaseReport,
    StaircaseRow, StaircaseWeight,
};

use serde::Serialize;
use thiserror::Error;

use crate::quad::QuadError;
use crate::weights::OmegaWeight;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstructError {
    #[error("no root of xi(y) = -{m} y on the monotone branch")]
    NoBracket { m: f64 },
    #[error("degree {k} exceeds the evaluation cap {cap}")]
    InfeasibleDegree { k: u64, cap: u64 },
    #[error("no row satisfies the feasibility limits")]
    NoFeasibleRows,
    #[error("weight does not meet the growth condition: {0}")]
    Precondition(String),
    #[error(transparent)]
    Quad(#[from] QuadError),
}

/// `xi(t) = log omega(z + t)` on `(0, eps)`, where `z` is the first zero of `g` and `|g|`
/// increases on `(z, z + eps)`.
#[derive(Debug, Clone, Serialize)]
pub struct XiFunction {
    #[serde(skip)]
    pub weight: OmegaWeight,
    pub zero: f64,
    pub eps: f64,
}

impl XiFunction {
    pub fn new(weight: OmegaWeight) -> Self {
        let zero = weight.g.zeros().first().copied().unwrap_or(0.0);
        let eps = weight.g.monotone_radius();
        XiFunction { weight, zero, eps }
    }

    pub fn value(&self, t: f64) -> f64 {
        self.weight.log_value(self.zero + t)
    }

    /// `log(-xi(t))`, finite where `xi` itself overflows.
    pub fn log_neg(&self, t: f64) -> f64 {
        self.weight
            .f
            .ln_value(self.weight.g.abs_value(self.zero + t))
    }

    /// Whether `xi(r t) / xi(t)` keeps growing as `t` halves toward 0, sampled on `eps 2^-j`.
    pub fn ratio_grows(&self, r: f64) -> bool {
        let ratios: Vec<f64> = (2..24)
            .map(|j| self.eps * 0.5f64.powi(j))
            .map(|t| self.log_neg(r * t) - self.log_neg(t))
            .collect();
        ratios.windows(2).all(|w| w[1] > w[0]) && ratios.last().is_some_and(|&l| l > 10f64.ln())
    }
}

/// The root `y` of `xi(y) = -M y` on `(0, eps)`, by bisection on `log y`.
pub fn solve_lemma_m(xi: &XiFunction, m: f64) -> Result<f64, ConstructError> {
    // phi(u) = log(-xi(e^u)) - log M - u decreases from +inf
    let phi = |u: f64| xi.log_neg(u.exp()) - m.ln() - u;
    let mut hi = xi.eps.ln();
    if !(m > 0.0) || phi(hi) >= 0.0 {
        return Err(ConstructError::NoBracket { m });
    }
    let mut lo = hi - 1.0;
    while phi(lo) <= 0.0 {
        lo -= 2.0 * (hi - lo);
        if lo < -700.0 {
            return Err(ConstructError::NoBracket { m });
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if phi(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    Ok((0.5 * (lo + hi)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{FSpec, GSpec};

    #[test]
    fn root_matches_small_angle_model() {
        let xi = XiFunction::new(OmegaWeight::new(FSpec::power(1.0), GSpec::sin()));
        let y = solve_lemma_m(&xi, 100.0).unwrap();
        // independent bisection on y sin y = 1/M
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if mid * mid.sin() < 0.01 {
                lo = mid
            } else {
                hi = mid
            }
        }
        assert!((y / lo - 1.0).abs() < 1e-12);
        assert!((y / 0.1 - 1.0).abs() < 5e-3);
        assert!(solve_lemma_m(&xi, 100.0).unwrap() > solve_lemma_m(&xi, 400.0).unwrap());
    }

    #[test]
    fn root_residual_for_exp_power() {
        let xi = XiFunction::new(OmegaWeight::new(FSpec::exp_power(1.0), GSpec::sin()));
        for m in [10.0, 1e3, 1e6] {
            let y = solve_lemma_m(&xi, m).unwrap();
            assert!((xi.value(y) + m * y).abs() <= 1e-10 * m * y);
        }
        assert!(matches!(
            solve_lemma_m(&xi, 0.5),
            Err(ConstructError::NoBracket { .. })
        ));
    }

    #[test]
    fn growth_condition() {
        assert!(
            XiFunction::new(OmegaWeight::new(FSpec::exp_power(1.0), GSpec::sin())).ratio_grows(0.9)
        );
        assert!(
            !XiFunction::new(OmegaWeight::new(FSpec::power(1.0), GSpec::sin())).ratio_grows(0.9)
        );
    }

    #[test]
    fn xi_is_negative_increasing_and_unbounded() {
        let xi = XiFunction::new(OmegaWeight::new(FSpec::exp_power(1.0), GSpec::sin()));
        let ts: Vec<f64> = (1..40).map(|j| xi.eps * 0.8f64.powi(j)).collect();
        assert!(ts.iter().all(|&t| xi.value(t) < 0.0));
        assert!(ts.windows(2).all(|w| xi.value(w[1]) <= xi.value(w[0])));
        assert_eq!(xi.value(1e-3), f64::NEG_INFINITY);
    }
}
