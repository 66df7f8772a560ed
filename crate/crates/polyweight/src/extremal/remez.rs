//! Remez-type inequalities: how much of a polynomial's norm can hide on a small set.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::ExtremalError;
use crate::logmath::{circle_distance, log_add_exp, wrap_angle, SignedLog, TAU};
use crate::quad::{weighted_norm, QuadConfig};
use crate::trigpoly::{chebyshev_offset_eval, PointEvaluator, TrigPoly};
use crate::weights::{CompositeWeight, IntervalSet, Weight};

/// Complements thinner than this count as empty.
const MIN_COMPLEMENT: f64 = 1e-12;
/// Allowance for rounding in the two computed norms.
const ROUNDING: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RemezCheck {
    /// `log ||T||` over the whole circle.
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

fn split_norms<P, W>(
    w: &W,
    p: f64,
    poly: &P,
    e: &IntervalSet,
    cfg: &QuadConfig,
) -> Result<(f64, f64), ExtremalError>
where
    P: PointEvaluator + ?Sized,
    W: Weight + ?Sized,
{
    let rest = e.complement();
    if rest.measure() < MIN_COMPLEMENT {
        return Err(ExtremalError::EmptyComplement);
    }
    let whole = weighted_norm(poly, w, p, &IntervalSet::full(), cfg)?.log_value;
    let outside = weighted_norm(poly, w, p, &rest, cfg)?.log_value;
    Ok((whole, outside))
}

/// Checks `||T||_{p, w} <= exp(C n |E|) ||T||_{p, w, complement of E}` in log form.
pub fn remez_verify<P, W>(
    w: &W,
    p: f64,
    poly: &P,
    e: &IntervalSet,
    c: f64,
    cfg: &QuadConfig,
) -> Result<RemezCheck, ExtremalError>
where
    P: PointEvaluator + ?Sized,
    W: Weight + ?Sized,
{
    let (lhs, outside) = split_norms(w, p, poly, e, cfg)?;
    let rhs = c * poly.degree() as f64 * e.measure() + outside;
    Ok(RemezCheck {
        lhs,
        rhs,
        pass: lhs <= rhs + ROUNDING,
    })
}

/// The unweighted bounds: `exp(4 n |B|)` for the sup norm and `1 + exp(4 n |B| p)` for `L_p`.
pub fn unweighted_remez_check<P: PointEvaluator + ?Sized>(
    poly: &P,
    e: &IntervalSet,
    p: f64,
    cfg: &QuadConfig,
) -> Result<RemezCheck, ExtremalError> {
    let w = CompositeWeight::unit();
    let (lhs, outside) = split_norms(&w, p, poly, e, cfg)?;
    let exponent = 4.0 * poly.degree() as f64 * e.measure();
    let factor = if p == f64::INFINITY {
        exponent
    } else {
        log_add_exp(0.0, exponent * p)
    };
    let rhs = factor + outside;
    Ok(RemezCheck {
        lhs,
        rhs,
        pass: lhs <= rhs + ROUNDING,
    })
}

/// `T_{2n}(cos((t - center)/2) / cos(width/4))`, a degree-`n` polynomial bounded by 1 off the
/// arc of length `width` around `center` and exponentially large on it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConcentratedPoly {
    pub n: u64,
    pub center: f64,
    pub width: f64,
}

impl ConcentratedPoly {
    fn offset_at_distance(&self, d: f64) -> f64 {
        let q = 0.25 * self.width;
        // cos(d/2) - cos(q) as a product, accurate near the arc ends
        -2.0 * ((0.5 * d + q) / 2.0).sin() * ((0.5 * d - q) / 2.0).sin() / q.cos()
    }
}

impl PointEvaluator for ConcentratedPoly {
    fn degree(&self) -> u64 {
        self.n
    }

    fn eval_log(&self, t: f64) -> SignedLog {
        let d = wrap_angle(t - self.center).abs();
        chebyshev_offset_eval(2 * self.n, self.offset_at_distance(d)).0
    }

    fn log_abs_bound(&self, t0: f64, t1: f64) -> f64 {
        let inside = t1 - t0 >= TAU || {
            let shift = (self.center - t0).rem_euclid(TAU);
            shift <= t1 - t0
        };
        let d = if inside {
            0.0
        } else {
            circle_distance(self.center, t0).min(circle_distance(self.center, t1))
        };
        let delta = self.offset_at_distance(d);
        if delta <= 0.0 {
            0.0
        } else {
            chebyshev_offset_eval(2 * self.n, delta).0.log_abs
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RemezFamily {
    /// Uniform random coefficients.
    Random,
    /// [`ConcentratedPoly`] peaked on a component of the exceptional set.
    Concentrated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExceptionalKind {
    /// One to three arcs, each of length at least `1/n`.
    Intervals,
    /// Up to eight arcs of any length below `1/n`.
    MeasurableUnion,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RemezFit {
    /// Largest observed `(log ||T|| - log ||T||_off) / (n |E|)` over all degrees.
    pub constant: f64,
    pub per_degree: Vec<(usize, f64)>,
}

struct Draw {
    arcs: Vec<(f64, f64)>,
    coeffs: Vec<f64>,
}

/// Arc lengths scale like `1/n` so that draws are comparable across degrees; the same seed
/// gives the same shapes at every degree.
fn draw(rng: &mut ChaCha8Rng, n: usize, kind: ExceptionalKind) -> Draw {
    let nf = n as f64;
    let (count, lengths): (usize, Vec<f64>) = match kind {
        ExceptionalKind::Intervals => {
            let count = rng.gen_range(1..=3);
            (
                count,
                (0..count)
                    .map(|_| {
                        (rng.gen_range(1.0..6.0) / nf)
                            .min(1.0 / count as f64)
                            .max(1.0 / nf)
                    })
                    .collect(),
            )
        }
        ExceptionalKind::MeasurableUnion => {
            let count = rng.gen_range(1..=8);
            (
                count,
                (0..count).map(|_| rng.gen_range(0.05..1.0) / nf).collect(),
            )
        }
    };
    let arcs = (0..count)
        .zip(lengths)
        .map(|(_, len)| {
            let c = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
            (c - 0.5 * len, c + 0.5 * len)
        })
        .collect();
    let coeffs = (0..2 * n + 1).map(|_| rng.gen_range(-1.0..1.0)).collect();
    Draw { arcs, coeffs }
}

fn sample_constant<W: Weight + ?Sized>(
    w: &W,
    p: f64,
    n: usize,
    family: RemezFamily,
    d: &Draw,
    cfg: &QuadConfig,
) -> Result<f64, ExtremalError> {
    let e = IntervalSet::from_arcs(d.arcs.iter().copied());
    let measure = e.measure();
    if measure <= 0.0 {
        return Ok(0.0);
    }
    let (whole, outside) = match family {
        RemezFamily::Random => split_norms(w, p, &TrigPoly::from_vector(n, &d.coeffs), &e, cfg)?,
        RemezFamily::Concentrated => {
            let (a, b) = d.arcs[0];
            let poly = ConcentratedPoly {
                n: n as u64,
                center: 0.5 * (a + b),
                width: b - a,
            };
            split_norms(w, p, &poly, &e, cfg)?
        }
    };
    Ok((whole - outside) / (n as f64 * measure))
}

/// Largest observed Remez ratio over `samples` random `(T, E)` pairs per degree: a lower
/// estimate of the best constant.
pub fn remez_constant_fit<W: Weight + ?Sized>(
    w: &W,
    p: f64,
    degrees: &[usize],
    family: RemezFamily,
    kind: ExceptionalKind,
    samples: usize,
    seed: u64,
) -> Result<RemezFit, ExtremalError> {
    let cfg = QuadConfig::default();
    let mut per_degree = Vec::with_capacity(degrees.len());
    for &n in degrees {
        if n == 0 {
            return Err(ExtremalError::InvalidParameter(
                "degrees must be positive".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let draws: Vec<Draw> = (0..samples).map(|_| draw(&mut rng, n, kind)).collect();
        let values: Result<Vec<f64>, ExtremalError> = draws
            .par_iter()
            .map(|d| sample_constant(w, p, n, family, d, &cfg))
            .collect();
        let best = values?.into_iter().fold(f64::NEG_INFINITY, f64::max);
        per_degree.push((n, best));
    }
    let constant = per_degree
        .iter()
        .map(|x| x.1)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(RemezFit {
        constant,
        per_degree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{FSpec, GSpec};

    #[test]
    fn cosine_with_small_exceptional_arc() {
        let e = IntervalSet::from_arcs([(-0.05, 0.05)]);
        let r = remez_verify(
            &CompositeWeight::unit(),
            f64::INFINITY,
            &TrigPoly::cos_k(8),
            &e,
            4.0,
            &QuadConfig::default(),
        )
        .unwrap();
        assert!(r.pass);
        assert!(r.lhs.abs() < 1e-12);
        assert!((r.rhs - 4.0 * 8.0 * 0.1).abs() < 1e-9);
    }

    #[test]
    fn full_circle_has_empty_complement() {
        let e = IntervalSet::from_arcs([(-std::f64::consts::PI, std::f64::consts::PI)]);
        let r = remez_verify(
            &CompositeWeight::unit(),
            1.0,
            &TrigPoly::cos_k(2),
            &e,
            4.0,
            &QuadConfig::default(),
        );
        assert_eq!(r, Err(ExtremalError::EmptyComplement));
    }

    #[test]
    fn concentrated_poly_profile() {
        let q = ConcentratedPoly {
            n: 10,
            center: 1.0,
            width: 0.3,
        };
        let direct = |t: f64| {
            let x = ((t - 1.0) / 2.0).cos() / (0.3f64 / 4.0).cos();
            (20.0 * x.acosh()).cosh()
        };
        for t in [0.9, 1.0, 1.1] {
            assert!((q.eval_log(t).log_abs - direct(t).ln()).abs() < 1e-11);
        }
        assert!(q.eval_log(2.0).log_abs <= 1e-15);
        assert!(q.eval_log(1.15).log_abs.abs() < 1e-10);
        assert!(q.log_abs_bound(0.5, 1.2) >= q.eval_log(1.0).log_abs - 1e-12);
        assert_eq!(q.log_abs_bound(2.0, 3.0), 0.0);
        // degree-n polynomial in t: interpolation through 2n+2 samples reproduces it
        let m = 22;
        let samples: Vec<f64> = (0..m)
            .map(|j| {
                q.eval_log(-std::f64::consts::PI + TAU * j as f64 / m as f64)
                    .to_f64()
            })
            .collect();
        let t = TrigPoly::interpolate(&samples).unwrap();
        assert!((t.eval(0.37) - q.eval_log(0.37).to_f64()).abs() < 1e-8 * t.abs_coefficient_sum());
    }

    #[test]
    fn unit_weight_fit_below_four() {
        let w = CompositeWeight::unit();
        for family in [RemezFamily::Random, RemezFamily::Concentrated] {
            let fit = remez_constant_fit(
                &w,
                f64::INFINITY,
                &[4, 8],
                family,
                ExceptionalKind::Intervals,
                8,
                3,
            )
            .unwrap();
            assert!(
                fit.constant > 0.0 && fit.constant <= 4.1,
                "{family:?}: {}",
                fit.constant
            );
        }
    }

    #[test]
    fn concentrated_beats_random() {
        let w = CompositeWeight::single(FSpec::power(1.0), GSpec::sin());
        let conc = remez_constant_fit(
            &w,
            1.0,
            &[8],
            RemezFamily::Concentrated,
            ExceptionalKind::Intervals,
            8,
            5,
        )
        .unwrap();
        let rand = remez_constant_fit(
            &w,
            1.0,
            &[8],
            RemezFamily::Random,
            ExceptionalKind::Intervals,
            8,
            5,
        )
        .unwrap();
        assert!(conc.constant > rand.constant);
    }
}
