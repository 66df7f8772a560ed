use super::chebyshev::chebyshev_offset_eval;
use super::TrigPoly;
use crate::logmath::SignedLog;
use crate::weights::SineForm;

/// A trigonometric polynomial known only through pointwise evaluation in sign/log form.
pub trait PointEvaluator: Sync {
    /// Trigonometric degree (sets sampling density).
    fn degree(&self) -> u64;
    fn eval_log(&self, t: f64) -> SignedLog;
    /// Upper bound of `log|P|` on `[t0, t1]`.
    fn log_abs_bound(&self, t0: f64, t1: f64) -> f64;
}

impl PointEvaluator for TrigPoly {
    fn degree(&self) -> u64 {
        TrigPoly::degree(self) as u64
    }

    fn eval_log(&self, t: f64) -> SignedLog {
        SignedLog::from_f64(self.eval(t))
    }

    fn log_abs_bound(&self, _t0: f64, _t1: f64) -> f64 {
        self.abs_coefficient_sum().ln()
    }
}

impl<P: PointEvaluator + ?Sized> PointEvaluator for &P {
    fn degree(&self) -> u64 {
        (**self).degree()
    }
    fn eval_log(&self, t: f64) -> SignedLog {
        (**self).eval_log(t)
    }
    fn log_abs_bound(&self, t0: f64, t1: f64) -> f64 {
        (**self).log_abs_bound(t0, t1)
    }
}

const SIN: SineForm = SineForm {
    amp: 1.0,
    freq: 1.0,
    phase: 0.0,
};
const SIN2: SineForm = SineForm {
    amp: 1.0,
    freq: 2.0,
    phase: 0.0,
};

/// `Q(t) = T_K(1 + a^2 - sin^2 t)`, a trigonometric polynomial of degree `2K`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CounterexampleQ {
    pub k: u64,
    pub a: f64,
}

pub fn counterexample_evaluator(k: u64, a: f64) -> CounterexampleQ {
    assert!(
        k >= 1 && a > 0.0 && a < 1.0,
        "counterexample needs K >= 1 and 0 < a < 1"
    );
    CounterexampleQ { k, a }
}

impl CounterexampleQ {
    /// `y - 1 = a^2 - sin^2 t`, factored to keep accuracy where `|sin t|` is close to `a`.
    pub fn offset(&self, t: f64) -> f64 {
        let s = t.sin();
        (self.a - s) * (self.a + s)
    }

    pub fn derivative(&self) -> CounterexampleDerivative {
        CounterexampleDerivative { q: *self }
    }

    fn max_offset(&self, t0: f64, t1: f64) -> f64 {
        let m = SIN.min_abs(t0, t1);
        (self.a - m) * (self.a + m)
    }
}

impl PointEvaluator for CounterexampleQ {
    fn degree(&self) -> u64 {
        2 * self.k
    }

    fn eval_log(&self, t: f64) -> SignedLog {
        chebyshev_offset_eval(self.k, self.offset(t)).0
    }

    fn log_abs_bound(&self, t0: f64, t1: f64) -> f64 {
        let delta = self.max_offset(t0, t1);
        if delta <= 0.0 {
            0.0
        } else {
            chebyshev_offset_eval(self.k, delta).0.log_abs
        }
    }
}

/// `Q'(t) = -T_K'(1 + a^2 - sin^2 t) sin 2t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CounterexampleDerivative {
    pub q: CounterexampleQ,
}

impl PointEvaluator for CounterexampleDerivative {
    fn degree(&self) -> u64 {
        2 * self.q.k
    }

    fn eval_log(&self, t: f64) -> SignedLog {
        let (_, tp) = chebyshev_offset_eval(self.q.k, self.q.offset(t));
        SignedLog::from_f64(-(2.0 * t).sin()).mul(tp)
    }

    fn log_abs_bound(&self, t0: f64, t1: f64) -> f64 {
        let k = self.q.k as f64;
        let delta = self.q.max_offset(t0, t1);
        let log_tp = if delta > 0.0 {
            chebyshev_offset_eval(self.q.k, delta).1.log_abs
        } else {
            // |U_{K-1}(cos theta)| <= min(K, 1/sin theta)
            let one_minus_y2 = -delta * (2.0 + delta);
            (2.0 * k.ln()).min(k.ln() - 0.5 * one_minus_y2.ln())
        };
        log_tp + SIN2.max_abs(t0, t1).ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trigpoly::{chebyshev_eval, chebyshev_log_eval};
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn composition_anchors() {
        let q = counterexample_evaluator(12, 0.3);
        let at0 = q.eval_log(0.0);
        let (log_t, _) = chebyshev_log_eval(12, 1.09).unwrap();
        assert!((at0.log_abs - log_t).abs() < 1e-12);
        assert!(q.eval_log(FRAC_PI_2).to_f64().abs() <= 1.0);
        assert!((q.eval_log(FRAC_PI_2).to_f64() - chebyshev_eval(12, 0.09).unwrap()).abs() < 1e-12);
        assert!(q.derivative().eval_log(0.0).is_zero());
    }

    #[test]
    fn finite_differences_reproduce_log_derivative() {
        let q = counterexample_evaluator(9, 0.25);
        for t in [0.05, 0.2, 0.6, 1.3] {
            let h = 1e-6;
            let fd = (q.eval_log(t + h).to_f64() - q.eval_log(t - h).to_f64()) / (2.0 * h);
            let v = q.eval_log(t).to_f64();
            if v.abs() < 1e-3 {
                continue;
            }
            let ratio = q.derivative().eval_log(t).to_f64() / v;
            assert!(
                (fd / v - ratio).abs() < 1e-5 * ratio.abs().max(1.0),
                "t={t}"
            );
        }
    }

    #[test]
    fn bounds_dominate_values() {
        let q = counterexample_evaluator(40, 0.2);
        let d = q.derivative();
        for (t0, t1) in [(0.0, 0.1), (0.15, 0.3), (1.0, 2.0), (-0.3, 0.05)] {
            for j in 0..=200 {
                let t = t0 + (t1 - t0) * j as f64 / 200.0;
                assert!(q.eval_log(t).log_abs <= q.log_abs_bound(t0, t1) + 1e-9);
                assert!(
                    d.eval_log(t).log_abs <= d.log_abs_bound(t0, t1) + 1e-9,
                    "{t}"
                );
            }
        }
    }

    #[test]
    fn huge_degree_is_finite() {
        let q = counterexample_evaluator(100_000_000, 0.05);
        assert!(q.eval_log(0.01).log_abs.is_finite());
        assert!(q.eval_log(0.01).log_abs > 1e5);
        assert!(q.derivative().eval_log(1.0).log_abs.is_finite());
    }
}
