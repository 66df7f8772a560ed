//! Chebyshev polynomials of the first kind, directly and in log form above 1.

use std::f64::consts::LN_2;

use super::TrigError;
use crate::logmath::SignedLog;

/// `T_n(x)` by the three-term recurrence on `[-1, 1]` and the closed form on `1 < |x| <= 2`.
pub fn chebyshev_eval(n: u64, x: f64) -> Result<f64, TrigError> {
    if x.abs() > 2.0 || n > 10_000 {
        return Err(TrigError::OutOfRange { n, x });
    }
    if x.abs() <= 1.0 {
        if n == 0 {
            return Ok(1.0);
        }
        let (mut prev, mut cur) = (1.0, x);
        for _ in 1..n {
            let next = 2.0 * x * cur - prev;
            prev = cur;
            cur = next;
        }
        return Ok(cur);
    }
    let s = ((x.abs() - 1.0) * (x.abs() + 1.0)).sqrt();
    let value = 0.5 * ((x.abs() + s).powf(n as f64) + (x.abs() - s).powf(n as f64));
    if !value.is_finite() {
        return Err(TrigError::Overflow { n, x });
    }
    Ok(if x < 0.0 && n % 2 == 1 { -value } else { value })
}

/// `arccosh(1 + delta)`, with the series near zero to avoid the cancellation in `sqrt(x^2 - 1)`.
fn acosh1p(delta: f64) -> f64 {
    if delta < 1e-8 {
        (2.0 * delta).sqrt() * (1.0 - delta / 12.0)
    } else {
        (delta + (delta * (2.0 + delta)).sqrt()).ln_1p()
    }
}

fn ln_sinh(x: f64) -> f64 {
    if x > 20.0 {
        x - LN_2 + (-(-2.0 * x).exp()).ln_1p()
    } else {
        x.sinh().ln()
    }
}

/// `(log T_n(x), log T_n'(x))` for `x > 1`, stable for huge `n`.
pub fn chebyshev_log_eval(n: u64, x: f64) -> Result<(f64, f64), TrigError> {
    if !(x > 1.0) {
        return Err(TrigError::Domain { x });
    }
    let (t, tp) = log_above_one(n, x - 1.0);
    Ok((t, tp))
}

fn log_above_one(n: u64, delta: f64) -> (f64, f64) {
    let nf = n as f64;
    let eta = acosh1p(delta);
    let log_t = nf * eta + (-2.0 * nf * eta).exp().ln_1p() - LN_2;
    // T_n' = n U_{n-1} = n sinh(n eta) / sinh(eta)
    let log_tp = nf.ln() + ln_sinh(nf * eta) - ln_sinh(eta);
    debug_assert!(
        delta <= 1.0 / (nf * nf) || log_tp - log_t >= (nf / (4.0 * eta.sinh())).ln() - 1e-12,
        "logarithmic derivative bound violated at n={n}, delta={delta}"
    );
    (log_t, log_tp)
}

/// `T_n(1 + delta)` and `T_n'(1 + delta)` as signed logs, for any `delta >= -2` and any `n`.
/// On `[-1, 1]` the angle form `cos(n theta)` is used so that very large `n` stays cheap.
pub fn chebyshev_offset_eval(n: u64, delta: f64) -> (SignedLog, SignedLog) {
    let nf = n as f64;
    if n == 0 {
        return (SignedLog::from_f64(1.0), SignedLog::ZERO);
    }
    if delta > 0.0 {
        let (t, tp) = log_above_one(n, delta);
        return (SignedLog::new(1, t), SignedLog::new(1, tp));
    }
    if delta < -2.0 {
        // T_n(-x) = (-1)^n T_n(x), T_n'(-x) = (-1)^{n-1} T_n'(x)
        let (t, tp) = log_above_one(n, -2.0 - delta);
        let odd = n % 2 == 1;
        return (
            SignedLog::new(if odd { -1 } else { 1 }, t),
            SignedLog::new(if odd { 1 } else { -1 }, tp),
        );
    }
    // y = 1 + delta = cos(theta), 1 - y = 2 sin^2(theta/2)
    let theta = 2.0 * (-delta / 2.0).sqrt().min(1.0).asin();
    let value = (nf * theta).cos();
    let sin_theta = theta.sin();
    let deriv = if sin_theta.abs() < 1e-300 || theta.abs() < 1e-12 {
        nf * nf
    } else if (std::f64::consts::PI - theta).abs() < 1e-12 {
        // at y = -1: T_n'(-1) = (-1)^{n-1} n^2
        if n % 2 == 1 {
            nf * nf
        } else {
            -nf * nf
        }
    } else {
        nf * (nf * theta).sin() / sin_theta
    };
    (SignedLog::from_f64(value), SignedLog::from_f64(deriv))
}
