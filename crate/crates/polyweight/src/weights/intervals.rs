//! Finite unions of arcs on the circle `[-pi, pi)`.

use std::f64::consts::PI;

use serde::Serialize;

use super::catalog::GSpec;
use crate::logmath::{wrap_angle, TAU};

/// Sorted, disjoint arcs inside `[-pi, pi]`; an arc crossing `pi` is stored as two pieces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalSet {
    arcs: Vec<(f64, f64)>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet { arcs: Vec::new() }
    }

    pub fn full() -> Self {
        IntervalSet {
            arcs: vec![(-PI, PI)],
        }
    }

    /// Build from arbitrary `(start, end)` pairs with `end >= start`; lengths above `2 pi` cover the circle.
    pub fn from_arcs<I: IntoIterator<Item = (f64, f64)>>(raw: I) -> Self {
        let mut pieces = Vec::new();
        for (start, end) in raw {
            if end - start >= TAU {
                return Self::full();
            }
            if end <= start {
                continue;
            }
            let s = wrap_angle(start);
            let e = s + (end - start);
            if e > PI {
                pieces.push((s, PI));
                pieces.push((-PI, e - TAU));
            } else {
                pieces.push((s, e));
            }
        }
        Self::normalize(pieces)
    }

    fn normalize(mut pieces: Vec<(f64, f64)>) -> Self {
        pieces.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut arcs: Vec<(f64, f64)> = Vec::new();
        for (s, e) in pieces {
            match arcs.last_mut() {
                Some(last) if s <= last.1 => last.1 = last.1.max(e),
                _ => arcs.push((s, e)),
            }
        }
        IntervalSet { arcs }
    }

    pub fn arcs(&self) -> &[(f64, f64)] {
        &self.arcs
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn measure(&self) -> f64 {
        self.arcs.iter().map(|(s, e)| e - s).sum()
    }

    pub fn contains(&self, t: f64) -> bool {
        let t = wrap_angle(t);
        self.arcs.iter().any(|&(s, e)| t >= s && t < e)
            || (t == -PI && self.arcs.last().is_some_and(|a| a.1 >= PI))
    }

    pub fn complement(&self) -> Self {
        let mut out = Vec::new();
        let mut cursor = -PI;
        for &(s, e) in &self.arcs {
            if s > cursor {
                out.push((cursor, s));
            }
            cursor = cursor.max(e);
        }
        if cursor < PI {
            out.push((cursor, PI));
        }
        IntervalSet { arcs: out }
    }

    pub fn union(&self, other: &IntervalSet) -> Self {
        Self::normalize(self.arcs.iter().chain(other.arcs.iter()).copied().collect())
    }

    /// Whether every point of `self` lies in `other` (up to `tol`).
    pub fn is_subset_of(&self, other: &IntervalSet, tol: f64) -> bool {
        self.arcs.iter().all(|&(s, e)| {
            other
                .arcs
                .iter()
                .any(|&(a, b)| a <= s + tol && e <= b + tol)
        })
    }

    /// Arcs as connected components on the circle (a piece ending at `pi` joins one starting at `-pi`).
    pub fn components(&self) -> Vec<(f64, f64)> {
        let mut comps = self.arcs.clone();
        if comps.len() >= 2 && comps[0].0 <= -PI && comps[comps.len() - 1].1 >= PI {
            let first = comps.remove(0);
            let last = comps.last_mut().unwrap();
            last.1 = first.1 + TAU;
        }
        comps
    }
}

/// `B_eps = {t : |g(t)| < eps}` from the closed-form inverse of the catalog `g`.
pub fn singular_set(g: &GSpec, eps: f64) -> IntervalSet {
    match g.arc_radius(eps) {
        None => IntervalSet::full(),
        Some(r) => IntervalSet::from_arcs(g.zeros().iter().map(|&z| (z - r, z + r))),
    }
}

/// `B_eps` with every arc widened to length at least `1/n`; one arc per zero of `g`.
pub fn widened_singular_set(g: &GSpec, n: u64, eps: f64) -> IntervalSet {
    let half = 0.5 / n.max(1) as f64;
    match g.arc_radius(eps) {
        None => IntervalSet::full(),
        Some(r) => {
            let h = r.max(half);
            IntervalSet::from_arcs(g.zeros().iter().map(|&z| (z - h, z + h)))
        }
    }
}
