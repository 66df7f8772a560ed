use std::f64::consts::PI;

use crate::logmath::TAU;
use crate::weights::{IntervalSet, Weight};

use super::engine::{Integrator, DROP_NATS};
use super::gauss::GaussRule;
use super::panels::plan;
use super::{QuadConfig, QuadError};

/// Quadrature nodes with `log(node weight * omega)`, fitted once to a weight and a degree and
/// reused for many polynomials of that degree (Gram matrices, optimizer objectives).
#[derive(Debug, Clone)]
pub struct FixedRule {
    nodes: Vec<f64>,
    log_weights: Vec<f64>,
    log_scale: f64,
    scaled: Vec<f64>,
}

impl FixedRule {
    /// Panels resolve `|T|^2` for `T` of the given degree.
    pub fn new<W: Weight + ?Sized>(
        w: &W,
        domain: &IntervalSet,
        degree: u64,
        cfg: &QuadConfig,
    ) -> Result<Self, QuadError> {
        if domain.is_empty() {
            return Err(QuadError::EmptyDomain);
        }
        let integrand = |t: f64| w.log_weight(t);
        let bound = |a: f64, b: f64| w.log_weight_bound(a, b);
        let width = PI / (16.0 * degree.max(1) as f64);
        let panels = plan(domain, &w.singular_points(), width, cfg);
        let integral = Integrator {
            log_integrand: &integrand,
            log_bound: &bound,
            cfg,
            keep_leaves: true,
        }
        .run(&panels);
        let rule = GaussRule::legendre(cfg.nodes);
        let mut nodes = Vec::new();
        let mut log_weights = Vec::new();
        for (a, b) in integral.leaves {
            for (x, q) in rule.mapped(a, b) {
                let lw = w.log_weight(x) + q.ln();
                if lw > integral.log_value - DROP_NATS {
                    nodes.push(x);
                    log_weights.push(lw);
                }
            }
        }
        Ok(Self::from_parts(nodes, log_weights))
    }

    fn from_parts(nodes: Vec<f64>, log_weights: Vec<f64>) -> Self {
        let log_scale = log_weights
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        let scaled = log_weights
            .iter()
            .map(|lw| (lw - log_scale).exp())
            .collect();
        FixedRule {
            nodes,
            log_weights,
            log_scale,
            scaled,
        }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn log_weights(&self) -> &[f64] {
        &self.log_weights
    }

    /// The largest log weight; `scaled_weights` are relative to it.
    pub fn log_scale(&self) -> f64 {
        self.log_scale
    }

    pub fn scaled_weights(&self) -> &[f64] {
        &self.scaled
    }

    /// `log (sum w_i |v_i|^p)^(1/p)` for values at the nodes. Weights below `exp(-745)` of the
    /// largest one are lost, which is harmless for search but not for reporting.
    pub fn log_lp(&self, values: &[f64], p: f64) -> f64 {
        let s: f64 = if p == 1.0 {
            self.scaled
                .iter()
                .zip(values)
                .map(|(w, v)| w * v.abs())
                .sum()
        } else if p == 2.0 {
            self.scaled.iter().zip(values).map(|(w, v)| w * v * v).sum()
        } else {
            self.scaled
                .iter()
                .zip(values)
                .map(|(w, v)| w * v.abs().powf(p))
                .sum()
        };
        (s.ln() + self.log_scale) / p
    }
}

/// Scan points for sup norms: uniform at `density * degree` per circle plus geometric points
/// toward each singular point, with `log omega` at each.
#[derive(Debug, Clone)]
pub struct ScanGrid {
    nodes: Vec<f64>,
    log_weights: Vec<f64>,
}

impl ScanGrid {
    pub fn new<W: Weight + ?Sized>(
        w: &W,
        domain: &IntervalSet,
        degree: u64,
        cfg: &QuadConfig,
    ) -> Self {
        let step = TAU / (cfg.scan_density as f64 * degree.max(1) as f64);
        let mut nodes = Vec::new();
        for &(a, b) in domain.arcs() {
            let count = ((b - a) / step).ceil().max(1.0) as usize;
            nodes.extend((0..=count).map(|j| a + (b - a) * j as f64 / count as f64));
        }
        for z in w.singular_points() {
            for j in 1..=cfg.refinement_levels {
                let d = step * 0.5f64.powi(j as i32);
                for t in [z - d, z + d] {
                    if domain.contains(t) {
                        nodes.push(crate::logmath::wrap_angle(t));
                    }
                }
            }
        }
        nodes.sort_by(f64::total_cmp);
        nodes.dedup();
        let (nodes, log_weights): (Vec<f64>, Vec<f64>) = nodes
            .into_iter()
            .map(|t| (t, w.log_weight(t)))
            .filter(|&(_, lw)| lw > f64::NEG_INFINITY)
            .unzip();
        ScanGrid { nodes, log_weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn log_weights(&self) -> &[f64] {
        &self.log_weights
    }

    pub fn log_sup(&self, values: &[f64]) -> f64 {
        self.log_weights
            .iter()
            .zip(values)
            .map(|(lw, v)| lw + v.abs().ln())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `(1/s) log sum exp(s * (log|v_i| + log omega_i))`: a smooth stand-in for the max.
    pub fn log_smooth_max(&self, values: &[f64], sharpness: f64) -> f64 {
        let terms: Vec<f64> = self
            .log_weights
            .iter()
            .zip(values)
            .map(|(lw, v)| lw + v.abs().ln())
            .collect();
        let m = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if m == f64::NEG_INFINITY {
            return m;
        }
        let s: f64 = terms.iter().map(|x| (sharpness * (x - m)).exp()).sum();
        m + s.ln() / sharpness
    }
}
