use std::f64::consts::{LN_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::ConstructError;
use crate::logmath::{log_add_exp, log_diff_exp, wrap_angle};
use crate::quad::{weighted_sup_norm, GaussRule, QuadConfig, QuadError};
use crate::trigpoly::{counterexample_evaluator, PointEvaluator, TrigPoly};
use crate::weights::{IntervalSet, Weight};

const BRIDGE_CELLS: usize = 256;
const BRIDGE_NODES: usize = 16;
const MIN_LOG_ALPHA: f64 = -700.0;
const MAX_ROW_DEGREE: u64 = 10_000;

/// `W(x) = int_0^{pi x} exp(-1/sin^2 s) ds`, normalized so `W(1) = 1`; flat to all orders at both ends.
#[derive(Debug, Clone)]
pub struct Bridge {
    rule: GaussRule,
    cumulative: Vec<f64>,
    total: f64,
}

fn bump(s: f64) -> f64 {
    let sin = s.sin();
    if sin == 0.0 {
        0.0
    } else {
        (-1.0 / (sin * sin)).exp()
    }
}

const CELL: f64 = PI / BRIDGE_CELLS as f64;

impl Bridge {
    pub fn new() -> Self {
        let rule = GaussRule::legendre(BRIDGE_NODES);
        let mut cumulative = Vec::with_capacity(BRIDGE_CELLS + 1);
        let mut running = 0.0;
        cumulative.push(0.0);
        for j in 0..BRIDGE_CELLS {
            let (a, b) = (j as f64 * CELL, (j + 1) as f64 * CELL);
            running += rule.mapped(a, b).map(|(s, w)| w * bump(s)).sum::<f64>();
            cumulative.push(running);
        }
        Bridge {
            rule,
            cumulative,
            total: running,
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x >= 1.0 {
            return 1.0;
        }
        let s = PI * x;
        let j = (s / CELL).round() as usize;
        let piece: f64 = self
            .rule
            .mapped(j as f64 * CELL, s)
            .map(|(u, w)| w * bump(u))
            .sum();
        ((self.cumulative[j] + piece) / self.total).clamp(0.0, 1.0)
    }
}

impl Default for Bridge {
    fn default() -> Self {
        Bridge::new()
    }
}

/// Even weight with levels `d_n = exp(-exp(gamma n^2))`: equal to `d_{n+1}` on
/// `[alpha_{n+1}, alpha_n / 2]` and rising through the bridge to `d_n` on `[alpha_n / 2, alpha_n]`,
/// where `alpha_n = d_n^2`. Frozen at `d_{n_max + 1}` below `alpha_{n_max} / 2`.
#[derive(Debug, Clone)]
pub struct StaircaseWeight {
    pub gamma: f64,
    /// First level index; the smallest `n` with `alpha_{n+1} <= alpha_n / 2`.
    pub n_start: u64,
    pub n_max: u64,
    bridge: Bridge,
}

impl StaircaseWeight {
    pub fn log_level(&self, n: u64) -> f64 {
        -(self.gamma * (n * n) as f64).exp()
    }

    pub fn log_alpha(&self, n: u64) -> f64 {
        2.0 * self.log_level(n)
    }

    /// `K_n = floor(1 / (100 alpha_n))`, saturating.
    pub fn degree(&self, n: u64) -> u64 {
        let log_k = -self.log_alpha(n) - 100f64.ln();
        if log_k >= 63.0 * LN_2 {
            u64::MAX
        } else {
            log_k.exp().floor() as u64
        }
    }

    pub fn bridge(&self) -> &Bridge {
        &self.bridge
    }

    /// `log omega` at `t = exp(log_t)`, valid far below the smallest positive double.
    pub fn log_value_at_log(&self, log_t: f64) -> f64 {
        if log_t >= self.log_alpha(self.n_start) {
            return self.log_level(self.n_start);
        }
        for n in self.n_start..=self.n_max {
            let top = self.log_alpha(n);
            if log_t >= top - LN_2 {
                let x = 2.0 * (log_t - top).exp() - 1.0;
                let (low, high) = (self.log_level(n + 1), self.log_level(n));
                return log_add_exp(low, log_diff_exp(high, low) + self.bridge.value(x).ln());
            }
            if n == self.n_max || log_t >= self.log_alpha(n + 1) {
                return self.log_level(n + 1);
            }
        }
        self.log_level(self.n_max + 1)
    }

    pub fn log_value(&self, t: f64) -> f64 {
        let r = wrap_angle(t).abs();
        if r == 0.0 {
            self.log_level(self.n_max + 1)
        } else {
            self.log_value_at_log(r.ln())
        }
    }
}

fn largest_abs(t0: f64, t1: f64) -> f64 {
    if t1 - t0 >= 2.0 * PI {
        return PI;
    }
    let (a, b) = (wrap_angle(t0), wrap_angle(t1));
    // the arc crosses +-pi exactly when wrapping reverses the order
    if b < a || (t1 > t0 && a == b) {
        PI
    } else {
        a.abs().max(b.abs())
    }
}

impl Weight for StaircaseWeight {
    fn log_weight(&self, t: f64) -> f64 {
        self.log_value(t)
    }

    fn log_weight_bound(&self, t0: f64, t1: f64) -> f64 {
        self.log_value(largest_abs(t0, t1))
    }

    fn singular_points(&self) -> Vec<f64> {
        vec![0.0]
    }
}

pub fn staircase_weight(gamma: f64, n_max: u64) -> Result<StaircaseWeight, ConstructError> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(ConstructError::Precondition(format!(
            "gamma must be positive, got {gamma}"
        )));
    }
    let mut sw = StaircaseWeight {
        gamma,
        n_start: 1,
        n_max,
        bridge: Bridge::new(),
    };
    sw.n_start = (1..)
        .find(|&n| sw.log_alpha(n + 1) <= sw.log_alpha(n) - LN_2)
        .unwrap_or(1);
    if n_max < sw.n_start {
        return Err(ConstructError::Precondition(format!(
            "n_max = {n_max} lies below the first separated level {}",
            sw.n_start
        )));
    }
    Ok(sw)
}

/// `log omega(alpha_n / 2) / log omega(alpha_n)`, which equals `exp(gamma (2n + 1))`.
pub fn staircase_ratio(sw: &StaircaseWeight, n: u64) -> f64 {
    let top = sw.log_alpha(n);
    sw.log_value_at_log(top - LN_2) / sw.log_value_at_log(top)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StaircaseRow {
    pub n: u64,
    pub k: u64,
    pub log_alpha: f64,
    /// Largest `||T' omega|| / (K ||T omega||)` over the trials.
    pub constant: f64,
    /// The same maximum normalized by `K / 100` instead of `K`.
    pub constant_scaled: f64,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StaircaseReport {
    pub gamma: f64,
    pub rows: Vec<StaircaseRow>,
    pub constant: f64,
    /// Every row's constant lies within 50% of the mean.
    pub stable: bool,
}

/// `||T'||_{sup, omega} / (K ||T||_{sup, omega})`; 0 for constants.
pub fn staircase_ratio_of<P, D>(
    sw: &StaircaseWeight,
    poly: &P,
    derivative: &D,
    k: u64,
) -> Result<f64, QuadError>
where
    P: PointEvaluator + ?Sized,
    D: PointEvaluator + ?Sized,
{
    let cfg = QuadConfig::default();
    let full = IntervalSet::full();
    let top = weighted_sup_norm(derivative, sw, &full, &cfg)?.log_value;
    if top == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    let bottom = weighted_sup_norm(poly, sw, &full, &cfg)?.log_value;
    Ok((top - (k as f64).ln() - bottom).exp())
}

/// Empirical Bernstein constant at degree `K_n` for each feasible row: random polynomials
/// of degree `K_n`, `cos K_n t`, and `T_{K/2}(1 + a^2 - sin^2 t)` with `a` near `alpha_n`.
pub fn staircase_bernstein_check(
    sw: &StaircaseWeight,
    n_rows: &[u64],
    trials: usize,
    seed: u64,
) -> Result<StaircaseReport, ConstructError> {
    let feasible: Vec<u64> = n_rows
        .iter()
        .copied()
        .filter(|&n| n >= sw.n_start && n <= sw.n_max)
        .filter(|&n| {
            sw.log_alpha(n) >= MIN_LOG_ALPHA && (1..=MAX_ROW_DEGREE).contains(&sw.degree(n))
        })
        .collect();
    if feasible.is_empty() {
        return Err(ConstructError::NoFeasibleRows);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(feasible.len());
    for n in feasible {
        let k = sw.degree(n);
        let degree = k as usize;
        let mut ratios = Vec::new();
        let seed_poly = TrigPoly::cos_k(degree);
        ratios.push(staircase_ratio_of(
            sw,
            &seed_poly,
            &seed_poly.derivative(),
            k,
        )?);
        let alpha = sw.log_alpha(n).exp();
        for a in [0.5 * alpha, alpha, 2.0 * alpha] {
            let q = counterexample_evaluator((k / 2).max(1), a);
            ratios.push(staircase_ratio_of(sw, &q, &q.derivative(), k)?);
        }
        for _ in 0..trials {
            let cos = (0..=degree).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let sin = (0..=degree)
                .map(|j| {
                    if j == 0 {
                        0.0
                    } else {
                        rng.gen_range(-1.0..1.0)
                    }
                })
                .collect();
            let t = TrigPoly::new(cos, sin);
            ratios.push(staircase_ratio_of(sw, &t, &t.derivative(), k)?);
        }
        let constant = ratios.iter().copied().fold(0.0, f64::max);
        rows.push(StaircaseRow {
            n,
            k,
            log_alpha: sw.log_alpha(n),
            constant,
            constant_scaled: 100.0 * constant,
            trials: ratios.len(),
        });
    }
    let mean = rows.iter().map(|r| r.constant).sum::<f64>() / rows.len() as f64;
    let stable = rows.iter().all(|r| (r.constant - mean).abs() <= 0.5 * mean);
    let constant = rows.iter().map(|r| r.constant).fold(0.0, f64::max);
    Ok(StaircaseReport {
        gamma: sw.gamma,
        rows,
        constant,
        stable,
    })
}
