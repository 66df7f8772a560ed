//! Fourier coefficients `(1/pi) int omega(t) e^{ikt} dt` of weights.
//!
//! For products of power-family factors the integrand continues analytically into the upper
//! half-plane between consecutive zeros, and the path is lifted there: the oscillating factor
//! then decays instead of cancelling, so coefficients far below machine epsilon relative to
//! `max omega` keep full relative accuracy. Other weights are integrated on the real line.

use std::f64::consts::PI;

use rustfft::num_complex::Complex64;

use crate::logmath::{SignedLog, TAU};
use crate::weights::{CompositeWeight, DoublingFactor, FFamily, IntervalSet, Weight};

use super::gauss::GaussRule;
use super::panels::plan;
use super::QuadConfig;

/// Cosine and sine coefficients in sign/log form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierCoefficient {
    pub cos: SignedLog,
    pub sin: SignedLog,
}

/// `(1/pi) int omega(t) cos kt dt`.
pub fn fourier_coefficient(w: &CompositeWeight, k: u64, cfg: &QuadConfig) -> f64 {
    fourier_coefficient_log(w, k, cfg).cos.to_f64()
}

pub fn fourier_coefficient_log(
    w: &CompositeWeight,
    k: u64,
    cfg: &QuadConfig,
) -> FourierCoefficient {
    let z = if contour_applies(w) {
        contour_integral(w, k, cfg)
    } else {
        real_line_integral(w, k, cfg)
    };
    let cos = SignedLog::new(sign(z.re), z.log_abs_re - PI.ln());
    let sin = if w.is_even() {
        SignedLog::ZERO
    } else {
        SignedLog::new(sign(z.im), z.log_abs_im - PI.ln())
    };
    FourierCoefficient { cos, sin }
}

fn sign(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// A complex number `exp(shift) * (re + i im)`, with both parts also available as logs.
struct ScaledComplex {
    re: f64,
    im: f64,
    log_abs_re: f64,
    log_abs_im: f64,
}

/// Sums `exp(log_mag) * e^{i phase}` terms without overflow.
#[derive(Default)]
struct ComplexLogSum {
    terms: Vec<(f64, f64)>,
}

impl ComplexLogSum {
    fn push(&mut self, log_mag: f64, phase: f64) {
        // non-finite terms only arise where the integrand has underflowed to zero
        if log_mag.is_finite() && phase.is_finite() {
            self.terms.push((log_mag, phase));
        }
    }

    fn finish(&self) -> ScaledComplex {
        let m = self
            .terms
            .iter()
            .map(|t| t.0)
            .fold(f64::NEG_INFINITY, f64::max);
        if m == f64::NEG_INFINITY {
            return ScaledComplex {
                re: 0.0,
                im: 0.0,
                log_abs_re: m,
                log_abs_im: m,
            };
        }
        let (mut re, mut im) = (0.0, 0.0);
        for &(l, ph) in &self.terms {
            let r = (l - m).exp();
            re += r * ph.cos();
            im += r * ph.sin();
        }
        ScaledComplex {
            re,
            im,
            log_abs_re: m + re.abs().ln(),
            log_abs_im: m + im.abs().ln(),
        }
    }
}

fn contour_applies(w: &CompositeWeight) -> bool {
    !w.factors.is_empty()
        && w.factors
            .iter()
            .all(|f| matches!(f.f.family, FFamily::Power { .. }))
}

/// Steepest admissible lift angle: `(sigma g)^(-alpha)` keeps a positive real part near the
/// zeros as long as `alpha * angle < pi/2`; the saddle sits at `pi / (2 (alpha + 1))`.
fn lift_slope(w: &CompositeWeight) -> f64 {
    let angle = w
        .factors
        .iter()
        .map(|f| PI / (2.0 * (f.f.alpha() + 1.0)))
        .fold(PI / 4.0, f64::min);
    angle.tan()
}

fn contour_integral(w: &CompositeWeight, k: u64, cfg: &QuadConfig) -> ScaledComplex {
    let mut zeros = w.singular_points();
    zeros.push(zeros[0] + TAU);
    let kappa = lift_slope(w);
    let kf = k as f64;
    let rule = GaussRule::legendre(cfg.nodes);
    let mut sum = ComplexLogSum::default();
    for pair in zeros.windows(2) {
        let (z0, z1) = (pair[0], pair[1]);
        let len = z1 - z0;
        let mid = 0.5 * (z0 + z1);
        // sign of each inner function on this subinterval
        let signs: Vec<f64> = w.factors.iter().map(|f| f.g.value(mid).signum()).collect();
        let jacobi = match w.doubling {
            DoublingFactor::Jacobi { gamma, theta } if gamma != 0.0 => {
                let form = DoublingFactor::form(theta);
                Some((gamma, form, form.value(mid).signum()))
            }
            _ => None,
        };
        let path = |s: f64| -> (Complex64, Complex64) {
            let phase = PI * (s - z0) / len;
            let t = Complex64::new(s, kappa * len / PI * phase.sin());
            let dt = Complex64::new(1.0, kappa * phase.cos());
            (t, dt)
        };
        let log_integrand = |t: Complex64| -> Complex64 {
            let mut e = Complex64::new(w.log_scale, kf * t.re) + Complex64::new(-kf * t.im, 0.0);
            for (factor, &sg) in w.factors.iter().zip(&signs) {
                let form = factor.g.form();
                let g = sg * form.amp * (form.freq * (t - form.phase)).sin();
                e -= (-factor.f.alpha() * g.ln()).exp();
            }
            if let Some((gamma, form, sg)) = jacobi {
                let u = sg * form.amp * (form.freq * (t - form.phase)).sin();
                e += gamma * u.ln();
            }
            e
        };
        let width = (PI / (8.0 * kf.max(1.0))).min(len / 64.0);
        let panels = plan_open(z0, z1, width, cfg);
        for (a, b) in panels {
            for (s, q) in rule.mapped(a, b) {
                let (t, dt) = path(s);
                let e = log_integrand(t) + dt.ln();
                sum.push(e.re + q.ln(), e.im);
            }
        }
    }
    sum.finish()
}

/// Panels on `[z0, z1]` (not wrapped) graded toward both ends, tails included down to the
/// working-precision floor.
fn plan_open(z0: f64, z1: f64, width: f64, cfg: &QuadConfig) -> Vec<(f64, f64)> {
    let shift = 0.5 * (z0 + z1);
    let local = IntervalSet::from_arcs([(z0 - shift, z1 - shift)]);
    let p = plan(&local, &[z0 - shift, z1 - shift], width, cfg);
    let mut out: Vec<(f64, f64)> = p
        .panels
        .iter()
        .map(|&(a, b)| (a + shift, b + shift))
        .collect();
    for mut tail in p.tails {
        while !tail.exhausted() {
            let ((a, b), rest) = tail.split();
            out.push((a + shift, b + shift));
            tail = rest;
        }
    }
    out
}

/// Real-line Gauss panels with the weight factored against its maximum; absolute accuracy
/// is limited to about `1e-16 * max omega`.
fn real_line_integral(w: &CompositeWeight, k: u64, cfg: &QuadConfig) -> ScaledComplex {
    let kf = k as f64;
    let width = PI / (8.0 * kf.max(1.0));
    let p = plan(&IntervalSet::full(), &w.singular_points(), width, cfg);
    let rule = GaussRule::legendre(cfg.nodes);
    let mut sum = ComplexLogSum::default();
    let mut add = |a: f64, b: f64| {
        for (t, q) in rule.mapped(a, b) {
            sum.push(w.log_weight(t) + q.ln(), kf * t);
        }
    };
    for &(a, b) in &p.panels {
        add(a, b);
    }
    for mut tail in p.tails {
        while !tail.exhausted() {
            let ((a, b), rest) = tail.split();
            add(a, b);
            tail = rest;
        }
    }
    sum.finish()
}
