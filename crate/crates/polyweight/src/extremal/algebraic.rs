//! Algebraic polynomials on `[-1, 1]` through `x = cos t`, and Mhaskar-Rakhmanov-Saff numbers.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use super::basis::{chebyshev_derivative_row, chebyshev_row, damped_derivative_row};
use super::inequalities::sampler;
use super::search::{confirm, multistart, Objective, Probe, SearchOptions};
use super::{ExtremalError, ExtremalReport, Extremizer, Method};
use crate::logmath::SignedLog;
use crate::quad::{integrate_log, weighted_norm, QuadConfig};
use crate::trigpoly::PointEvaluator;
use crate::weights::{dedup_angles, IntervalSet, SineForm, Weight};

const SIN: SineForm = SineForm {
    amp: 1.0,
    freq: 1.0,
    phase: 0.0,
};
const ROUNDING: f64 = 1e-12;

/// `omega(t) |sin t|`: a trigonometric weight times the Jacobian of `x = cos t`.
#[derive(Debug, Clone)]
pub struct JacobianWeight<W> {
    pub inner: W,
}

impl<W: Weight> Weight for JacobianWeight<W> {
    fn log_weight(&self, t: f64) -> f64 {
        self.inner.log_weight(t) + t.sin().abs().ln()
    }

    fn log_weight_bound(&self, t0: f64, t1: f64) -> f64 {
        self.inner.log_weight_bound(t0, t1) + SIN.max_abs(t0, t1).ln()
    }

    fn singular_points(&self) -> Vec<f64> {
        let mut points = self.inner.singular_points();
        points.extend([0.0, PI]);
        dedup_angles(points)
    }
}

fn chebyshev_sum(coeffs: &[f64], t: f64, row: fn(usize, f64, &mut [f64])) -> f64 {
    let mut values = vec![0.0; coeffs.len()];
    row(coeffs.len() - 1, t, &mut values);
    values.iter().zip(coeffs).map(|(a, b)| a * b).sum()
}

fn log_weighted_abs_sum(coeffs: &[f64], power: i32) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| c.abs() * (k as f64).powi(power))
        .sum::<f64>()
        .ln()
}

/// `P(cos t) = sum c_k T_k(cos t)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgebraicPoly {
    pub coeffs: Vec<f64>,
}

impl PointEvaluator for AlgebraicPoly {
    fn degree(&self) -> u64 {
        self.coeffs.len() as u64 - 1
    }
    fn eval_log(&self, t: f64) -> SignedLog {
        SignedLog::from_f64(chebyshev_sum(&self.coeffs, t, chebyshev_row))
    }
    fn log_abs_bound(&self, _t0: f64, _t1: f64) -> f64 {
        log_weighted_abs_sum(&self.coeffs, 0)
    }
}

/// `P'(cos t)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgebraicDerivative {
    pub coeffs: Vec<f64>,
}

impl PointEvaluator for AlgebraicDerivative {
    fn degree(&self) -> u64 {
        self.coeffs.len() as u64 - 1
    }
    fn eval_log(&self, t: f64) -> SignedLog {
        SignedLog::from_f64(chebyshev_sum(&self.coeffs, t, chebyshev_derivative_row))
    }
    fn log_abs_bound(&self, _t0: f64, _t1: f64) -> f64 {
        log_weighted_abs_sum(&self.coeffs, 2)
    }
}

/// `sqrt(1 - x^2) P'(x)` at `x = cos t`, which is `sum k c_k sin kt`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhiDerivative {
    pub coeffs: Vec<f64>,
}

impl PointEvaluator for PhiDerivative {
    fn degree(&self) -> u64 {
        self.coeffs.len() as u64 - 1
    }
    fn eval_log(&self, t: f64) -> SignedLog {
        SignedLog::from_f64(chebyshev_sum(&self.coeffs, t, damped_derivative_row))
    }
    fn log_abs_bound(&self, _t0: f64, _t1: f64) -> f64 {
        log_weighted_abs_sum(&self.coeffs, 1)
    }
}

fn half_circle() -> IntervalSet {
    IntervalSet::from_arcs([(0.0, PI)])
}

/// Norms on `[-1, 1]` after substitution: the Jacobian enters for `p < inf` only.
fn with_measure<W: Weight + ?Sized, R>(w: &W, p: f64, f: impl FnOnce(&dyn Weight) -> R) -> R {
    struct Plain<'a, W: ?Sized>(&'a W);
    impl<W: Weight + ?Sized> Weight for Plain<'_, W> {
        fn log_weight(&self, t: f64) -> f64 {
            self.0.log_weight(t)
        }
        fn log_weight_bound(&self, t0: f64, t1: f64) -> f64 {
            self.0.log_weight_bound(t0, t1)
        }
        fn singular_points(&self) -> Vec<f64> {
            self.0.singular_points()
        }
    }
    if p == f64::INFINITY {
        f(&Plain(w))
    } else {
        f(&JacobianWeight { inner: Plain(w) })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlgebraicCheck {
    /// `log ||phi P' w||_p`.
    pub lhs: f64,
    /// `log (C n ||P w||_p)`.
    pub rhs: f64,
    pub pass: bool,
}

/// Checks `||phi P' w||_p <= C n ||P w||_p` on `[-1, 1]`, `phi(x) = sqrt(1 - x^2)`, with `w`
/// given through its pullback `w(cos t)` and `P` in the Chebyshev basis.
pub fn algebraic_bernstein_verify<W: Weight + ?Sized>(
    coeffs: &[f64],
    w: &W,
    p: f64,
    c: f64,
) -> Result<AlgebraicCheck, ExtremalError> {
    if coeffs.len() < 2 {
        return Err(ExtremalError::InvalidParameter(
            "polynomial must have degree at least 1".into(),
        ));
    }
    let n = (coeffs.len() - 1) as f64;
    let cfg = QuadConfig::default().with_tolerance(1e-12);
    let domain = half_circle();
    let (lhs, norm) = with_measure(w, p, |m| -> Result<(f64, f64), ExtremalError> {
        let lhs = weighted_norm(
            &PhiDerivative {
                coeffs: coeffs.to_vec(),
            },
            m,
            p,
            &domain,
            &cfg,
        )?
        .log_value;
        let norm = weighted_norm(
            &AlgebraicPoly {
                coeffs: coeffs.to_vec(),
            },
            m,
            p,
            &domain,
            &cfg,
        )?
        .log_value;
        Ok((lhs, norm))
    })?;
    let rhs = c.ln() + n.ln() + norm;
    Ok(AlgebraicCheck {
        lhs,
        rhs,
        pass: lhs <= rhs + ROUNDING,
    })
}

/// Lower bound for `max ||P'||_p / ||P||_p` over algebraic polynomials of degree `n` in the
/// pulled-back weight; normalized by `n^2`.
pub fn algebraic_markov_constant<W: Weight + ?Sized>(
    w: &W,
    n: usize,
    p: f64,
    opts: &SearchOptions,
) -> Result<ExtremalReport, ExtremalError> {
    if n == 0 {
        return Err(ExtremalError::InvalidParameter(
            "degree must be at least 1".into(),
        ));
    }
    let domain = half_circle();
    let dims = n + 1;
    let cfg = QuadConfig::default().with_tolerance(1e-12);
    let (coeffs, value, searched) = with_measure(w, p, |m| -> Result<_, ExtremalError> {
        let objective = Objective {
            numerator: Probe::new(sampler(m, &domain, n, p)?, dims, |t, r| {
                chebyshev_derivative_row(n, t, r)
            }),
            denominator: Probe::new(sampler(m, &domain, n, p)?, dims, |t, r| {
                chebyshev_row(n, t, r)
            }),
        };
        let unit = |i: usize| {
            (0..dims)
                .map(|j| if i == j { 1.0 } else { 0.0 })
                .collect::<Vec<f64>>()
        };
        let seeds = vec![unit(n), unit(n - 1), vec![1.0; dims]];
        let found = multistart(&objective, dims, seeds, opts);
        let exact = |c: &[f64]| {
            let num = weighted_norm(
                &AlgebraicDerivative { coeffs: c.to_vec() },
                m,
                p,
                &domain,
                &cfg,
            );
            let den = weighted_norm(&AlgebraicPoly { coeffs: c.to_vec() }, m, p, &domain, &cfg);
            match (num, den) {
                (Ok(a), Ok(b)) => a.log_value - b.log_value,
                _ => f64::NEG_INFINITY,
            }
        };
        Ok(confirm(&found, exact))
    })?;
    Ok(ExtremalReport {
        constant_log: value,
        normalized: value.exp() / (n * n) as f64,
        extremizer: Extremizer::Algebraic(coeffs),
        method: Method::Multistart,
        restarts: opts.restarts,
        residual: (searched - value).abs(),
        flagged: false,
    })
}

/// Smallest `1 - a` tried before declaring that no root exists.
const MRS_GAP_FLOOR: f64 = 1e-14;

/// `log` of `(2/pi) int_0^1 a x Q'(a x) / sqrt(1 - x^2) dx` for `Q(x) = (1 - x^2)^(-alpha)`,
/// written with `x = sin theta` and `gap = 1 - a`.
fn mrs_log_integral(alpha: f64, gap: f64, cfg: &QuadConfig) -> f64 {
    let a = 1.0 - gap;
    let m = gap * (2.0 - gap);
    let head = (2.0 * alpha).ln() + 2.0 * a.ln();
    let f = move |theta: f64| {
        let (s, c) = theta.sin_cos();
        head + 2.0 * s.ln() - (alpha + 1.0) * (c * c + m * s * s).ln()
    };
    // increasing on [0, pi/2]
    let bound = move |_t0: f64, t1: f64| f(t1.min(FRAC_PI_2));
    let (log_value, _, _) = integrate_log(
        &f,
        &bound,
        &IntervalSet::from_arcs([(0.0, FRAC_PI_2)]),
        &[FRAC_PI_2],
        PI / 16.0,
        cfg,
    );
    (2.0 / PI).ln() + log_value
}

fn mrs_config() -> QuadConfig {
    QuadConfig::default().with_tolerance(1e-13)
}

/// The MRS number `a_n` of `exp(-(1 - x^2)^(-alpha))`, by bisection on `log(1 - a_n)`.
pub fn mrs_number(alpha: f64, n: u64) -> Result<f64, ExtremalError> {
    if !(alpha > 0.0) || n == 0 {
        return Err(ExtremalError::InvalidParameter(format!(
            "need alpha > 0 and n >= 1, got {alpha}, {n}"
        )));
    }
    let cfg = mrs_config();
    let target = (n as f64).ln();
    let (mut lo, mut hi) = (MRS_GAP_FLOOR.ln(), 0.0f64);
    if mrs_log_integral(alpha, lo.exp(), &cfg) < target {
        return Err(ExtremalError::NoBracket { target: n as f64 });
    }
    // the integral decreases as the gap grows
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let v = mrs_log_integral(alpha, mid.exp(), &cfg);
        if v > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 || (v - target).abs() < 1e-13 {
            break;
        }
    }
    Ok(1.0 - (0.5 * (lo + hi)).exp())
}

/// `|I(a) / n - 1|` for the defining integral `I`, evaluated with `cfg`.
pub fn mrs_residual(alpha: f64, n: u64, a: f64, cfg: &QuadConfig) -> f64 {
    (mrs_log_integral(alpha, 1.0 - a, cfg) - (n as f64).ln())
        .exp_m1()
        .abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{CompositeWeight, FSpec, GSpec};

    fn chebyshev(n: usize) -> Vec<f64> {
        (0..=n).map(|k| if k == n { 1.0 } else { 0.0 }).collect()
    }

    #[test]
    fn chebyshev_is_extremal_in_sup_norm() {
        for n in [3, 7] {
            let r = algebraic_bernstein_verify(
                &chebyshev(n),
                &CompositeWeight::unit(),
                f64::INFINITY,
                1.0,
            )
            .unwrap();
            assert!(r.pass);
            assert!((r.lhs - r.rhs).abs() < 1e-10);
        }
    }

    #[test]
    fn chebyshev_l2_ratio_in_lebesgue_measure() {
        // int (1 - x^2) T_n'^2 dx / int T_n^2 dx = n^2 * 2n^2 / (2n^2 - 1)
        let n = 5.0f64;
        let exact = (2.0 * n * n / (2.0 * n * n - 1.0)).sqrt();
        let r =
            algebraic_bernstein_verify(&chebyshev(5), &CompositeWeight::unit(), 2.0, 1.0).unwrap();
        assert!(!r.pass);
        assert!((r.lhs - r.rhs - exact.ln()).abs() < 1e-10);
        assert!(
            algebraic_bernstein_verify(
                &chebyshev(5),
                &CompositeWeight::unit(),
                2.0,
                exact * (1.0 + 1e-9)
            )
            .unwrap()
            .pass
        );
    }

    #[test]
    fn l2_norm_uses_jacobian() {
        // int_{-1}^{1} x^2 dx = 2/3 with P = T_1
        let r =
            algebraic_bernstein_verify(&[0.0, 1.0], &CompositeWeight::unit(), 2.0, 1.0).unwrap();
        assert!((r.rhs - 0.5 * (2.0f64 / 3.0).ln()).abs() < 1e-10);
        // sqrt(1 - x^2) * 1: int (1 - x^2) = 4/3
        assert!((r.lhs - 0.5 * (4.0f64 / 3.0).ln()).abs() < 1e-10);
    }

    #[test]
    fn markov_unit_weight() {
        let r = algebraic_markov_constant(
            &CompositeWeight::unit(),
            4,
            f64::INFINITY,
            &SearchOptions {
                restarts: 4,
                seed: 2,
            },
        )
        .unwrap();
        assert!(
            r.constant() >= 15.99 && r.constant() <= 16.0 + 1e-9,
            "{}",
            r.constant()
        );
    }

    #[test]
    fn markov_weighted_stays_below_unweighted_rate_growth() {
        let w = CompositeWeight::single(FSpec::power(2.0), GSpec::sin());
        let opts = SearchOptions {
            restarts: 2,
            seed: 2,
        };
        let small = algebraic_markov_constant(&w, 4, f64::INFINITY, &opts)
            .unwrap()
            .constant();
        let large = algebraic_markov_constant(&w, 16, f64::INFINITY, &opts)
            .unwrap()
            .constant();
        let slope = (large / small).ln() / 4f64.ln();
        assert!(slope <= 4.0 / 3.0 + 0.2, "{slope}");
    }

    #[test]
    fn mrs_numbers_increase() {
        let mut last = 0.0;
        for n in [1, 2, 5, 10, 100] {
            let a = mrs_number(1.0, n).unwrap();
            assert!(a > last && a < 1.0);
            last = a;
        }
    }

    #[test]
    fn mrs_residual_at_higher_order() {
        let a = mrs_number(1.0, 100).unwrap();
        let fine = QuadConfig {
            nodes: 24,
            ..QuadConfig::default()
        }
        .with_tolerance(1e-14);
        assert!(mrs_residual(1.0, 100, a, &fine) <= 1e-8);
    }

    #[test]
    fn mrs_small_exponent_has_no_bracket() {
        // the integral grows like (1 - a)^(-alpha - 1/2), about 1e10 at the smallest gap
        assert!(matches!(
            mrs_number(0.25, 1_000_000_000_000),
            Err(ExtremalError::NoBracket { .. })
        ));
    }
}
