use std::f64::consts::PI;

use super::catalog::{FSpec, GSpec, SineForm};
use super::scale::EmpiricalConstants;
use super::{Weight, WeightError};

/// `omega(t) = exp(-F(|g(t)|))`.
#[derive(Debug, Clone)]
pub struct OmegaWeight {
    pub f: FSpec,
    pub g: GSpec,
    constants: EmpiricalConstants,
}

impl OmegaWeight {
    /// The cap of `F` is set to `max |g|`.
    pub fn new(f: FSpec, g: GSpec) -> Self {
        let f = f.with_cap(g.bound());
        let constants = EmpiricalConstants::estimate(&f);
        OmegaWeight { f, g, constants }
    }

    pub fn constants(&self) -> EmpiricalConstants {
        self.constants
    }

    pub fn log_value(&self, t: f64) -> f64 {
        let x = self.g.abs_value(t);
        if x == 0.0 {
            return f64::NEG_INFINITY;
        }
        -self.f.value(x)
    }

    /// `d/dt log omega = -F'(|g|) sign(g) g'`.
    pub fn log_derivative(&self, t: f64) -> Result<f64, WeightError> {
        if self.g.form().zero_distance(t) < 1e-15 {
            return Err(WeightError::AtSingularity { t });
        }
        let g = self.g.value(t);
        Ok(-self.f.derivative(g.abs()) * g.signum() * self.g.derivative(t))
    }

    pub fn log_bound(&self, t0: f64, t1: f64) -> f64 {
        let x = self.g.form().max_abs(t0, t1);
        if x == 0.0 {
            f64::NEG_INFINITY
        } else {
            -self.f.value(x)
        }
    }

    pub fn describe(&self) -> String {
        let fam = match self.f.family {
            super::FFamily::Power { alpha } => format!("pow:{alpha}"),
            super::FFamily::PowerLog { alpha, xi } => format!("powlog:{alpha}:{xi}"),
            super::FFamily::ExpPower { alpha } => format!("exppow:{alpha}"),
        };
        format!("omega({fam},{})", self.g.name())
    }
}

/// The doubling factor `u` in `omega_1 ... omega_s u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DoublingFactor {
    One,
    /// `|sin((t - theta)/2)|^gamma`, `gamma > -1`.
    Jacobi {
        gamma: f64,
        theta: f64,
    },
}

impl DoublingFactor {
    pub(crate) fn form(theta: f64) -> SineForm {
        SineForm {
            amp: 1.0,
            freq: 0.5,
            phase: theta,
        }
    }

    pub fn log_value(&self, t: f64) -> f64 {
        match *self {
            DoublingFactor::One => 0.0,
            DoublingFactor::Jacobi { gamma, theta } => {
                if gamma == 0.0 {
                    return 0.0;
                }
                gamma * Self::form(theta).abs_value(t).ln()
            }
        }
    }

    fn log_bound(&self, t0: f64, t1: f64) -> f64 {
        match *self {
            DoublingFactor::One => 0.0,
            DoublingFactor::Jacobi { gamma, theta } => {
                let form = Self::form(theta);
                let x = if gamma >= 0.0 {
                    form.max_abs(t0, t1)
                } else {
                    form.min_abs(t0, t1)
                };
                gamma * x.ln()
            }
        }
    }
}

/// Product of admissible factors times a doubling factor, with an optional constant scale.
#[derive(Debug, Clone)]
pub struct CompositeWeight {
    pub factors: Vec<OmegaWeight>,
    pub doubling: DoublingFactor,
    pub log_scale: f64,
}

impl CompositeWeight {
    pub fn new(factors: Vec<OmegaWeight>, doubling: DoublingFactor) -> Result<Self, WeightError> {
        if let DoublingFactor::Jacobi { gamma, .. } = doubling {
            if gamma <= -1.0 || !gamma.is_finite() {
                return Err(WeightError::InvalidParameter(format!(
                    "jacobi exponent {gamma} must exceed -1"
                )));
            }
        }
        Ok(CompositeWeight {
            factors,
            doubling,
            log_scale: 0.0,
        })
    }

    /// The constant weight 1.
    pub fn unit() -> Self {
        CompositeWeight {
            factors: Vec::new(),
            doubling: DoublingFactor::One,
            log_scale: 0.0,
        }
    }

    pub fn single(f: FSpec, g: GSpec) -> Self {
        CompositeWeight {
            factors: vec![OmegaWeight::new(f, g)],
            doubling: DoublingFactor::One,
            log_scale: 0.0,
        }
    }

    pub fn scaled(mut self, log_scale: f64) -> Self {
        self.log_scale += log_scale;
        self
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
            && matches!(self.doubling, DoublingFactor::One)
            && self.log_scale == 0.0
    }

    /// Whether `omega(-t) = omega(t)` identically.
    pub fn is_even(&self) -> bool {
        let doubling_even = match self.doubling {
            DoublingFactor::One => true,
            DoublingFactor::Jacobi { gamma, theta } => {
                gamma == 0.0 || DoublingFactor::form(theta).abs_is_even()
            }
        };
        doubling_even && self.factors.iter().all(|f| f.g.form().abs_is_even())
    }

    pub fn describe(&self) -> String {
        let mut parts: Vec<String> = self.factors.iter().map(OmegaWeight::describe).collect();
        if let DoublingFactor::Jacobi { gamma, theta } = self.doubling {
            parts.push(format!("jacobi({gamma},{theta})"));
        }
        if parts.is_empty() {
            parts.push("one".into());
        }
        parts.join(" * ")
    }
}

impl From<OmegaWeight> for CompositeWeight {
    fn from(w: OmegaWeight) -> Self {
        CompositeWeight {
            factors: vec![w],
            doubling: DoublingFactor::One,
            log_scale: 0.0,
        }
    }
}

impl CompositeWeight {
    /// The product weight; at most one side may carry a nontrivial doubling factor.
    pub fn times(&self, other: &CompositeWeight) -> Result<CompositeWeight, WeightError> {
        let doubling = match (self.doubling, other.doubling) {
            (DoublingFactor::One, d) | (d, DoublingFactor::One) => d,
            _ => {
                return Err(WeightError::InvalidParameter(
                    "at most one doubling factor".into(),
                ))
            }
        };
        let factors = self.factors.iter().chain(&other.factors).cloned().collect();
        Ok(CompositeWeight {
            factors,
            doubling,
            log_scale: self.log_scale + other.log_scale,
        })
    }
}

impl Weight for CompositeWeight {
    fn log_weight(&self, t: f64) -> f64 {
        let mut total = self.log_scale;
        for factor in &self.factors {
            let v = factor.log_value(t);
            if v == f64::NEG_INFINITY {
                return v;
            }
            total += v;
        }
        total + self.doubling.log_value(t)
    }

    fn log_weight_bound(&self, t0: f64, t1: f64) -> f64 {
        let (t0, t1) = if t1 - t0 >= 2.0 * PI {
            (-PI, PI)
        } else {
            (t0, t1)
        };
        let mut total = self.log_scale;
        for factor in &self.factors {
            total += factor.log_bound(t0, t1);
        }
        total + self.doubling.log_bound(t0, t1)
    }

    fn singular_points(&self) -> Vec<f64> {
        let mut points: Vec<f64> = self
            .factors
            .iter()
            .flat_map(|f| f.g.zeros().iter().copied())
            .collect();
        if let DoublingFactor::Jacobi { gamma, theta } = self.doubling {
            if gamma != 0.0 {
                points.push(crate::logmath::wrap_angle(theta));
            }
        }
        super::dedup_angles(points)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn pow2_sin() -> CompositeWeight {
        CompositeWeight::single(FSpec::power(2.0), GSpec::sin())
    }

    #[test]
    fn catalog_values() {
        let w = pow2_sin();
        assert_eq!(w.log_weight(FRAC_PI_2), -1.0);
        assert_eq!(w.log_weight(0.0), f64::NEG_INFINITY);
        assert!((w.log_weight(PI / 6.0) + 4.0).abs() < 1e-14);
    }

    #[test]
    fn derivative_values() {
        let w = OmegaWeight::new(FSpec::power(2.0), GSpec::sin());
        assert!(w.log_derivative(FRAC_PI_2).unwrap().abs() < 1e-14);
        assert!((w.log_derivative(PI / 6.0).unwrap() - 8.0 * 3f64.sqrt()).abs() < 1e-12);
        assert!(matches!(
            w.log_derivative(0.0),
            Err(WeightError::AtSingularity { .. })
        ));
    }

    #[test]
    fn derivative_matches_central_difference() {
        let w = OmegaWeight::new(FSpec::power(1.0), GSpec::sin());
        let t = 0.01;
        let h = 1e-7;
        let fd = (w.log_value(t + h) - w.log_value(t - h)) / (2.0 * h);
        let exact = w.log_derivative(t).unwrap();
        assert!((fd - exact).abs() < 1e-6 * exact.abs());
    }

    #[test]
    fn even_for_sin_and_cos() {
        for g in [GSpec::sin(), GSpec::cos()] {
            let w = CompositeWeight::single(FSpec::power(1.5), g);
            for t in [0.3, 1.1, 2.9] {
                assert!((w.log_weight(t) - w.log_weight(-t)).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn product_is_sum_of_logs() {
        let a = OmegaWeight::new(FSpec::power(2.0), GSpec::sin());
        let b = OmegaWeight::new(FSpec::power(4.0), GSpec::cos());
        let jac = DoublingFactor::Jacobi {
            gamma: 0.5,
            theta: 0.3,
        };
        let w = CompositeWeight::new(vec![a.clone(), b.clone()], jac).unwrap();
        let t = 0.9;
        let expect = a.log_value(t) + b.log_value(t) + 0.5 * ((t - 0.3) / 2.0_f64).sin().abs().ln();
        assert!((w.log_weight(t) - expect).abs() < 1e-13);
        assert_eq!(CompositeWeight::unit().log_weight(1.234), 0.0);
    }

    #[test]
    fn bound_dominates_samples() {
        let w = CompositeWeight::new(
            vec![OmegaWeight::new(FSpec::power(1.0), GSpec::sin())],
            DoublingFactor::Jacobi {
                gamma: -0.5,
                theta: 1.0,
            },
        )
        .unwrap();
        for (t0, t1) in [(0.1, 0.4), (0.9, 1.2), (-3.0, -2.0), (2.0, 3.5)] {
            let bound = w.log_weight_bound(t0, t1);
            for k in 0..=50 {
                let t = t0 + (t1 - t0) * k as f64 / 50.0;
                assert!(w.log_weight(t) <= bound + 1e-12, "{t0} {t1} {t}");
            }
        }
    }

    #[test]
    fn rejects_bad_jacobi() {
        assert!(CompositeWeight::new(
            vec![],
            DoublingFactor::Jacobi {
                gamma: -1.0,
                theta: 0.0
            }
        )
        .is_err());
    }
}
