//! Adaptive panel integration of a nonnegative integrand given by its logarithm.

use crate::logmath::{log_add_exp, log_diff_exp, log_sum_exp};

use super::gauss::GaussRule;
use super::panels::Plan;
use super::QuadConfig;

/// Contributions this many nats below the running maximum are discarded.
pub(crate) const DROP_NATS: f64 = 1e4;
const MAX_DEPTH: u32 = 60;

#[derive(Debug, Clone)]
pub(crate) struct Integral {
    pub log_value: f64,
    pub log_error: f64,
    pub converged: bool,
    /// Accepted leaf panels, in plan order (only when requested).
    pub leaves: Vec<(f64, f64)>,
}

pub(crate) struct Integrator<'a> {
    pub log_integrand: &'a (dyn Fn(f64) -> f64 + Sync),
    pub log_bound: &'a (dyn Fn(f64, f64) -> f64 + Sync),
    pub cfg: &'a QuadConfig,
    pub keep_leaves: bool,
}

struct Accum {
    values: Vec<f64>,
    errors: Vec<f64>,
    converged: bool,
    leaves: Vec<(f64, f64)>,
}

impl Integrator<'_> {
    fn panel(&self, rule: &GaussRule, a: f64, b: f64) -> f64 {
        log_sum_exp(rule.mapped(a, b).map(|(x, w)| {
            let v = (self.log_integrand)(x);
            if v == f64::NEG_INFINITY {
                v
            } else {
                v + w.ln()
            }
        }))
    }

    pub fn run(&self, plan: &Plan) -> Integral {
        let rule = GaussRule::legendre(self.cfg.nodes);
        let log_tol = self.cfg.tolerance.ln();

        // coarse pass, discarding panels certified negligible against the running maximum
        let mut running = f64::NEG_INFINITY;
        let mut discarded = f64::NEG_INFINITY;
        let mut coarse: Vec<Option<f64>> = Vec::with_capacity(plan.panels.len());
        for &(a, b) in &plan.panels {
            let bound = (self.log_bound)(a, b) + (b - a).ln();
            if bound < running - DROP_NATS {
                discarded = log_add_exp(discarded, bound);
                coarse.push(None);
                continue;
            }
            let c = self.panel(&rule, a, b);
            running = running.max(c);
            coarse.push(Some(c));
        }
        let reference = log_sum_exp(coarse.iter().flatten().copied());
        if reference == f64::NEG_INFINITY && plan.tails.is_empty() {
            return Integral {
                log_value: reference,
                log_error: discarded,
                converged: true,
                leaves: Vec::new(),
            };
        }
        if reference.is_nan() || reference == f64::INFINITY {
            return Integral {
                log_value: reference,
                log_error: f64::INFINITY,
                converged: false,
                leaves: Vec::new(),
            };
        }
        let evaluated = coarse.iter().flatten().count().max(1) as f64;
        let budget = log_tol + reference - evaluated.ln();

        let mut acc = Accum {
            values: Vec::new(),
            errors: vec![discarded],
            converged: true,
            leaves: Vec::new(),
        };
        for (&(a, b), c) in plan.panels.iter().zip(&coarse) {
            if let Some(c) = *c {
                self.refine(&rule, a, b, c, budget, 0, &mut acc);
            }
        }
        // tails past the fixed levels: keep halving while levels still matter
        for tail in &plan.tails {
            let mut tail = *tail;
            let mut history: Vec<f64> = Vec::new();
            while !tail.exhausted() {
                let ((a, b), rest) = tail.split();
                let c = self.panel(&rule, a, b);
                self.refine(&rule, a, b, c, budget, 0, &mut acc);
                history.push(c);
                tail = rest;
                let n = history.len();
                if n >= 2 && history[n - 1] < budget - 10.0 && history[n - 2] < budget - 10.0 {
                    break;
                }
            }
            let remainder = tail_remainder(&history);
            if remainder > budget + 3.0 {
                acc.converged = false;
            }
            if remainder.is_finite() {
                acc.values.push(remainder);
            }
            acc.errors.push(remainder);
        }
        let log_value = log_sum_exp(acc.values.iter().copied());
        let log_error = log_sum_exp(acc.errors.iter().copied());
        let converged = acc.converged && log_error <= log_value + log_tol;
        Integral {
            log_value,
            log_error,
            converged,
            leaves: acc.leaves,
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn refine(
        &self,
        rule: &GaussRule,
        a: f64,
        b: f64,
        whole: f64,
        budget: f64,
        depth: u32,
        acc: &mut Accum,
    ) {
        let m = 0.5 * (a + b);
        let left = self.panel(rule, a, m);
        let right = self.panel(rule, m, b);
        let fine = log_add_exp(left, right);
        let diff = log_diff_exp(whole, fine);
        if fine.is_nan() || fine == f64::INFINITY {
            acc.converged = false;
            acc.values.push(fine);
            acc.errors.push(f64::INFINITY);
            return;
        }
        let negligible = whole.max(fine) < budget;
        // log-values of size L carry absolute rounding of about L * eps, so relative noise L * eps
        let noise = fine + (64.0 * f64::EPSILON * (1.0 + fine.abs())).ln();
        let floor = depth >= MAX_DEPTH || (b - a) < 1e-300 || m <= a || m >= b;
        let settled = diff <= budget.max(noise) || negligible;
        if settled || floor {
            if !settled {
                acc.converged = false;
            }
            acc.values.push(fine);
            acc.errors.push(diff);
            if self.keep_leaves {
                acc.leaves.push((a, m));
                acc.leaves.push((m, b));
            }
            return;
        }
        let half = budget - std::f64::consts::LN_2;
        self.refine(rule, a, m, left, half, depth + 1, acc);
        self.refine(rule, m, b, right, half, depth + 1, acc);
    }
}

/// Geometric estimate of what lies beyond the last computed tail level.
fn tail_remainder(history: &[f64]) -> f64 {
    match history {
        [] => f64::NEG_INFINITY,
        [.., prev, last] if *last == f64::NEG_INFINITY || *prev == f64::NEG_INFINITY => *last,
        [.., prev, last] => {
            let q = (last - prev).exp();
            if q < 1.0 {
                last + (q / (1.0 - q)).ln()
            } else {
                f64::INFINITY
            }
        }
        [only] => *only,
    }
}
