use super::basis::{trig_derivative_row, trig_row};
use super::gram::bernstein_l2;
use super::search::{confirm, multistart, Objective, Probe, Sampler, SearchOptions};
use super::{ExtremalError, ExtremalReport, Extremizer, Method};
use crate::quad::{weighted_norm, FixedRule, QuadConfig, QuadError, ScanGrid};
use crate::trigpoly::TrigPoly;
use crate::weights::{IntervalSet, PoweredWeight, Weight};

const REPORT_TOLERANCE: f64 = 1e-12;

pub(crate) fn sampler<W: Weight + ?Sized>(
    w: &W,
    domain: &IntervalSet,
    degree: usize,
    p: f64,
) -> Result<Sampler, QuadError> {
    let cfg = QuadConfig::default();
    if p == f64::INFINITY {
        Ok(Sampler::Sup {
            grid: ScanGrid::new(w, domain, degree as u64, &cfg),
        })
    } else if p > 0.0 {
        Ok(Sampler::Lp {
            rule: FixedRule::new(w, domain, degree as u64, &cfg)?,
            p,
        })
    } else {
        Err(QuadError::InvalidExponent(p))
    }
}

fn unit_vector(dims: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; dims];
    v[i] = 1.0;
    v
}

/// Lower bound for the weighted `L_p` Bernstein constant of degree `n`, `p` in `(0, inf]`.
/// Seeds are `cos nt` and the `L_2` extremizer; the returned ratio is re-evaluated with
/// adaptive quadrature (true sup for `p = inf`).
pub fn bernstein_lp<W: Weight + ?Sized>(
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
    let full = IntervalSet::full();
    let dims = 2 * n + 1;
    let objective = Objective {
        numerator: Probe::new(sampler(w, &full, n, p)?, dims, |t, r| {
            trig_derivative_row(n, t, r)
        }),
        denominator: Probe::new(sampler(w, &full, n, p)?, dims, |t, r| trig_row(n, t, r)),
    };
    let mut seeds = vec![unit_vector(dims, n)];
    if let Extremizer::Trig(t) = bernstein_l2(w, n)?.extremizer {
        seeds.push(t.to_vector());
    }
    let found = multistart(&objective, dims, seeds, opts);
    let cfg = QuadConfig::default().with_tolerance(REPORT_TOLERANCE);
    let exact = |c: &[f64]| {
        let t = TrigPoly::from_vector(n, c);
        let num = weighted_norm(&t.derivative(), w, p, &full, &cfg);
        let den = weighted_norm(&t, w, p, &full, &cfg);
        match (num, den) {
            (Ok(a), Ok(b)) => a.log_value - b.log_value,
            _ => f64::NEG_INFINITY,
        }
    };
    let (coeffs, value, searched) = confirm(&found, exact);
    Ok(ExtremalReport {
        constant_log: value,
        normalized: value.exp() / n as f64,
        extremizer: Extremizer::Trig(TrigPoly::from_vector(n, &coeffs)),
        method: Method::Multistart,
        restarts: opts.restarts,
        residual: (searched - value).abs(),
        flagged: false,
    })
}

fn reciprocal(p: f64) -> f64 {
    if p == f64::INFINITY {
        0.0
    } else {
        1.0 / p
    }
}

/// Lower bound for `max ||T||_{q, w} / ||T||_{p, w^(p/q)}` over degree `n`; normalized by
/// `n^(1/p - 1/q)`.
pub fn nikolskii_ratio<W: Weight + ?Sized>(
    w: &W,
    n: usize,
    p: f64,
    q: f64,
    opts: &SearchOptions,
) -> Result<ExtremalReport, ExtremalError> {
    if !(p > 0.0 && p <= q) {
        return Err(ExtremalError::InvalidParameter(format!(
            "need 0 < p <= q, got p = {p}, q = {q}"
        )));
    }
    let power = if p == q { 1.0 } else { p * reciprocal(q) };
    let lower = PoweredWeight { inner: w, power };
    let full = IntervalSet::full();
    let dims = 2 * n + 1;
    let objective = Objective {
        numerator: Probe::new(sampler(w, &full, n, q)?, dims, |t, r| trig_row(n, t, r)),
        denominator: Probe::new(sampler(&lower, &full, n, p)?, dims, |t, r| {
            trig_row(n, t, r)
        }),
    };
    let dirichlet: Vec<f64> = (0..dims).map(|i| if i <= n { 1.0 } else { 0.0 }).collect();
    let seeds = vec![unit_vector(dims, n), unit_vector(dims, 0), dirichlet];
    let found = multistart(&objective, dims, seeds, opts);
    let cfg = QuadConfig::default().with_tolerance(REPORT_TOLERANCE);
    let exact = |c: &[f64]| {
        let t = TrigPoly::from_vector(n, c);
        match (
            weighted_norm(&t, w, q, &full, &cfg),
            weighted_norm(&t, &lower, p, &full, &cfg),
        ) {
            (Ok(a), Ok(b)) => a.log_value - b.log_value,
            _ => f64::NEG_INFINITY,
        }
    };
    let (coeffs, value, searched) = confirm(&found, exact);
    let rate = (n.max(1) as f64).powf(reciprocal(p) - reciprocal(q));
    Ok(ExtremalReport {
        constant_log: value,
        normalized: value.exp() / rate,
        extremizer: Extremizer::Trig(TrigPoly::from_vector(n, &coeffs)),
        method: Method::Multistart,
        restarts: opts.restarts,
        residual: (searched - value).abs(),
        flagged: false,
    })
}
