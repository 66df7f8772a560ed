//! The closed catalog of scale functions `F` and inner functions `g`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::logmath::wrap_angle;

/// Parametric family of the outer function `F`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FFamily {
    /// `x^{-alpha}`
    Power { alpha: f64 },
    /// `x^{-alpha} |log x|^{xi}`
    PowerLog { alpha: f64, xi: f64 },
    /// `exp(x^{-alpha})`; decays too fast for the admissible class, used by counterexamples.
    ExpPower { alpha: f64 },
}

/// Outer function together with its domain cap `A`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FSpec {
    pub family: FFamily,
    pub cap: f64,
}

impl FSpec {
    pub fn new(family: FFamily) -> Self {
        FSpec { family, cap: 1.0 }
    }

    pub fn power(alpha: f64) -> Self {
        Self::new(FFamily::Power { alpha })
    }

    pub fn power_log(alpha: f64, xi: f64) -> Self {
        Self::new(FFamily::PowerLog { alpha, xi })
    }

    pub fn exp_power(alpha: f64) -> Self {
        Self::new(FFamily::ExpPower { alpha })
    }

    pub fn with_cap(mut self, cap: f64) -> Self {
        self.cap = cap;
        self
    }

    pub fn alpha(&self) -> f64 {
        match self.family {
            FFamily::Power { alpha }
            | FFamily::PowerLog { alpha, .. }
            | FFamily::ExpPower { alpha } => alpha,
        }
    }

    /// Whether the family belongs to the admissible (polynomially growing) class.
    pub fn is_admissible(&self) -> bool {
        !matches!(self.family, FFamily::ExpPower { .. })
    }

    /// `log F(x)` expressed through `u = log x`, valid far below the smallest double.
    pub fn ln_value_at_ln(&self, u: f64) -> f64 {
        match self.family {
            FFamily::Power { alpha } => -alpha * u,
            FFamily::PowerLog { alpha, xi } => -alpha * u + xi * u.abs().ln(),
            FFamily::ExpPower { alpha } => (-alpha * u).exp(),
        }
    }

    pub fn ln_value(&self, x: f64) -> f64 {
        self.ln_value_at_ln(x.ln())
    }

    /// `F(x)` for `x > 0`; `+inf` at zero.
    pub fn value(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return f64::INFINITY;
        }
        match self.family {
            FFamily::Power { alpha } => x.powf(-alpha),
            FFamily::PowerLog { alpha, xi } => x.powf(-alpha) * x.ln().abs().powf(xi),
            FFamily::ExpPower { alpha } => x.powf(-alpha).exp(),
        }
    }

    /// `F'(x)` for `x > 0`.
    pub fn derivative(&self, x: f64) -> f64 {
        match self.family {
            FFamily::Power { alpha } => -alpha * x.powf(-alpha - 1.0),
            FFamily::PowerLog { .. } | FFamily::ExpPower { .. } => {
                // F' = F * d(log F)/dx, with the logarithmic slope taken analytically
                -self.value(x) * self.elasticity(x) / x
            }
        }
    }

    /// `|F'(x)| x / F(x)`, the logarithmic slope of `F`.
    pub fn elasticity(&self, x: f64) -> f64 {
        match self.family {
            FFamily::Power { alpha } => alpha,
            FFamily::PowerLog { alpha, xi } => (alpha + xi / x.ln().abs()).abs(),
            FFamily::ExpPower { alpha } => alpha * x.powf(-alpha),
        }
    }

    /// Upper end of the grid on which the family's regularity constants are sampled.
    pub fn verified_top(&self) -> f64 {
        match self.family {
            FFamily::PowerLog { .. } => self.cap / 2.0,
            _ => self.cap,
        }
    }
}

/// `amp * sin(freq * (t - phase))`: every catalog inner function has this shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SineForm {
    pub amp: f64,
    pub freq: f64,
    pub phase: f64,
}

impl SineForm {
    pub fn value(&self, t: f64) -> f64 {
        self.amp * (self.freq * (t - self.phase)).sin()
    }

    pub fn derivative(&self, t: f64) -> f64 {
        self.amp * self.freq * (self.freq * (t - self.phase)).cos()
    }

    /// Argument distance to the nearest zero, in `[0, pi/2]`.
    fn reduced(&self, t: f64) -> f64 {
        let x = self.freq * (t - self.phase);
        (x - PI * (x / PI).round()).abs()
    }

    /// `|g(t)|`, accurate near the zeros.
    pub fn abs_value(&self, t: f64) -> f64 {
        self.amp * self.reduced(t).sin()
    }

    /// Distance in `t` to the nearest zero.
    pub fn zero_distance(&self, t: f64) -> f64 {
        self.reduced(t) / self.freq
    }

    /// Zeros in `[-pi, pi)`, sorted.
    pub fn zeros(&self) -> Vec<f64> {
        let spacing = PI / self.freq;
        let count = (2.0 * PI / spacing).round() as usize;
        let mut zeros: Vec<f64> = (0..count.max(1))
            .map(|j| wrap_angle(self.phase + j as f64 * spacing))
            .collect();
        zeros.sort_by(f64::total_cmp);
        zeros
    }

    /// Whether `|g(-t)| = |g(t)|` for all `t`.
    pub fn abs_is_even(&self) -> bool {
        let x = 2.0 * self.freq * self.phase / PI;
        (x - x.round()).abs() < 1e-12
    }

    /// `max |g|` over `[t0, t1]`.
    pub fn max_abs(&self, t0: f64, t1: f64) -> f64 {
        let u0 = self.freq * (t0 - self.phase);
        let u1 = self.freq * (t1 - self.phase);
        if u1 - u0 >= PI {
            return self.amp;
        }
        let peak = ((u0 - FRAC_PI_2) / PI).ceil() * PI + FRAC_PI_2;
        if peak <= u1 {
            self.amp
        } else {
            self.amp * u0.sin().abs().max(u1.sin().abs())
        }
    }

    /// `min |g|` over `[t0, t1]`.
    pub fn min_abs(&self, t0: f64, t1: f64) -> f64 {
        let u0 = self.freq * (t0 - self.phase);
        let u1 = self.freq * (t1 - self.phase);
        if u1 - u0 >= PI {
            return 0.0;
        }
        let zero = (u0 / PI).ceil() * PI;
        if zero <= u1 {
            0.0
        } else {
            self.amp * u0.sin().abs().min(u1.sin().abs())
        }
    }
}

/// Catalog of inner functions `g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GKind {
    Sin,
    Cos,
    /// `sin(t - theta)`
    SinShift {
        theta: f64,
    },
    /// `sin t cos t = sin(2t)/2`
    ProductSinCos,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GSpec {
    pub kind: GKind,
    form: SineForm,
    zeros: Vec<f64>,
}

impl GSpec {
    pub fn new(kind: GKind) -> Self {
        let form = match kind {
            GKind::Sin => SineForm {
                amp: 1.0,
                freq: 1.0,
                phase: 0.0,
            },
            GKind::Cos => SineForm {
                amp: 1.0,
                freq: 1.0,
                phase: -FRAC_PI_2,
            },
            GKind::SinShift { theta } => SineForm {
                amp: 1.0,
                freq: 1.0,
                phase: theta,
            },
            GKind::ProductSinCos => SineForm {
                amp: 0.5,
                freq: 2.0,
                phase: 0.0,
            },
        };
        GSpec {
            kind,
            form,
            zeros: form.zeros(),
        }
    }

    pub fn sin() -> Self {
        Self::new(GKind::Sin)
    }

    pub fn cos() -> Self {
        Self::new(GKind::Cos)
    }

    pub fn form(&self) -> &SineForm {
        &self.form
    }

    pub fn value(&self, t: f64) -> f64 {
        self.form.value(t)
    }

    pub fn derivative(&self, t: f64) -> f64 {
        self.form.derivative(t)
    }

    pub fn abs_value(&self, t: f64) -> f64 {
        self.form.abs_value(t)
    }

    pub fn zeros(&self) -> &[f64] {
        &self.zeros
    }

    /// `A = max |g|`.
    pub fn bound(&self) -> f64 {
        self.form.amp
    }

    /// `D = max |g'|`.
    pub fn derivative_bound(&self) -> f64 {
        self.form.amp * self.form.freq
    }

    /// Half-width of each arc of `{|g| < eps}` around a zero; `None` when the set is the whole circle.
    pub fn arc_radius(&self, eps: f64) -> Option<f64> {
        if eps >= self.form.amp {
            None
        } else {
            Some((eps / self.form.amp).asin() / self.form.freq)
        }
    }

    /// Constant `C(g)` in `|{|g| < eps}| <= C(g) eps`.
    pub fn measure_constant(&self) -> f64 {
        // asin(x) <= (pi/2) x on [0, 1]
        self.zeros.len() as f64 * PI / self.derivative_bound()
    }

    /// Distance from `t` to the monotonicity boundary: `|g|` increases on `(z, z + radius)`.
    pub fn monotone_radius(&self) -> f64 {
        FRAC_PI_2 / self.form.freq
    }

    pub fn name(&self) -> String {
        match self.kind {
            GKind::Sin => "sin".into(),
            GKind::Cos => "cos".into(),
            GKind::SinShift { theta } => format!("sinshift:{theta}"),
            GKind::ProductSinCos => "sincos".into(),
        }
    }
}
