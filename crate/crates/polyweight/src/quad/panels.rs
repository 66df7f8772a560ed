use crate::logmath::{circle_distance, TAU};
use crate::weights::IntervalSet;

use super::QuadConfig;

/// An end of a segment sitting on a singular point; refined geometrically past the fixed levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Tail {
    pub anchor: f64,
    /// Width of the part not yet covered by panels.
    pub width: f64,
    /// `+1` if the tail extends to the right of the anchor.
    pub dir: f64,
}

impl Tail {
    /// The next geometric panel and the remaining tail.
    pub fn split(self) -> ((f64, f64), Tail) {
        let half = 0.5 * self.width;
        let near = self.anchor + self.dir * half;
        let far = self.anchor + self.dir * self.width;
        let panel = if self.dir > 0.0 {
            (near, far)
        } else {
            (far, near)
        };
        (
            panel,
            Tail {
                width: half,
                ..self
            },
        )
    }

    /// Whether another split would collapse nodes onto the anchor.
    pub fn exhausted(&self) -> bool {
        self.width < 64.0 * self.anchor.abs() * f64::EPSILON || self.width < 1e-300
    }
}

#[derive(Debug, Clone, Default)]
pub(crate) struct Plan {
    pub panels: Vec<(f64, f64)>,
    pub tails: Vec<Tail>,
}

fn near_singular(x: f64, singular: &[f64]) -> bool {
    singular.iter().any(|&z| circle_distance(z, x) < 1e-13)
}

/// Panels of width at most `max_width`, refined geometrically toward every singular point.
pub(crate) fn plan(
    domain: &IntervalSet,
    singular: &[f64],
    max_width: f64,
    cfg: &QuadConfig,
) -> Plan {
    let mut out = Plan::default();
    for &(a, b) in domain.arcs() {
        let mut cuts = vec![a];
        cuts.extend(
            singular
                .iter()
                .copied()
                .filter(|&z| z > a + 1e-13 && z < b - 1e-13),
        );
        cuts.push(b);
        cuts.sort_by(f64::total_cmp);
        for w in cuts.windows(2) {
            segment(
                &mut out,
                w[0],
                w[1],
                near_singular(w[0], singular),
                near_singular(w[1], singular),
                max_width,
                cfg,
            );
        }
    }
    out
}

fn segment(
    out: &mut Plan,
    a: f64,
    b: f64,
    left: bool,
    right: bool,
    max_width: f64,
    cfg: &QuadConfig,
) {
    let len = b - a;
    if len <= 0.0 {
        return;
    }
    let by_width = (len / max_width).ceil() as usize;
    let by_count = (cfg.base_panels as f64 * len / TAU).ceil() as usize;
    let mut count = by_width.max(by_count).max(1);
    if left && right {
        count = count.max(2);
    }
    let h = len / count as f64;
    let edge = |j: usize| if j == count { b } else { a + j as f64 * h };
    for j in 0..count {
        let graded = (j == 0 && left) || (j + 1 == count && right);
        if !graded {
            out.panels.push((edge(j), edge(j + 1)));
            continue;
        }
        let (anchor, dir) = if j == 0 && left { (a, 1.0) } else { (b, -1.0) };
        let mut tail = Tail {
            anchor,
            width: h,
            dir,
        };
        for _ in 0..cfg.refinement_levels {
            if tail.exhausted() {
                break;
            }
            let (panel, rest) = tail.split();
            out.panels.push(panel);
            tail = rest;
        }
        out.tails.push(tail);
    }
}
