//! Log-domain helpers shared by every module.

use std::f64::consts::PI;

pub const TAU: f64 = 2.0 * PI;

/// `log(exp(a) + exp(b))` without overflow; `-inf` is the additive identity.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

pub fn log_sum_exp<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let values: Vec<f64> = values.into_iter().collect();
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY || max.is_nan() {
        return max;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

/// `log|exp(a) - exp(b)|`.
pub fn log_diff_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if lo == hi {
        return f64::NEG_INFINITY;
    }
    hi + (-(lo - hi).exp()).ln_1p()
}

/// A real number stored as sign and log-magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLog {
    pub sign: i8,
    pub log_abs: f64,
}

impl SignedLog {
    pub const ZERO: SignedLog = SignedLog {
        sign: 0,
        log_abs: f64::NEG_INFINITY,
    };

    pub fn new(sign: i8, log_abs: f64) -> Self {
        if sign == 0 || log_abs == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            SignedLog {
                sign: sign.signum(),
                log_abs,
            }
        }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            SignedLog {
                sign: if x > 0.0 { 1 } else { -1 },
                log_abs: x.abs().ln(),
            }
        }
    }

    pub fn to_f64(self) -> f64 {
        f64::from(self.sign) * self.log_abs.exp()
    }

    pub fn mul(self, other: SignedLog) -> SignedLog {
        SignedLog::new(self.sign * other.sign, self.log_abs + other.log_abs)
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }
}

/// Map an angle to `[-pi, pi)`.
pub fn wrap_angle(t: f64) -> f64 {
    let w = (t + PI).rem_euclid(TAU) - PI;
    if w >= PI {
        w - TAU
    } else {
        w
    }
}

/// Distance between two angles on the circle, in `[0, pi]`.
pub fn circle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}
