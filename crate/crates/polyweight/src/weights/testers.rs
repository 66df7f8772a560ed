//! Finite-resolution probes of the doubling and A* conditions. These are heuristic lower
//! bounds: a finite answer at one resolution proves nothing about finer scales.

use std::f64::consts::PI;

use super::{IntervalSet, Weight, WeightError};
use crate::logmath::{log_sum_exp, TAU};
use crate::quad::{weighted_lp_norm, QuadConfig};
use crate::trigpoly::TrigPoly;

const SAMPLES_PER_CELL: usize = 16;

/// Log masses of `2R` equal cells of the circle, `R` rounded up to a power of two.
fn cell_masses<W: Weight + ?Sized>(
    w: &W,
    resolution: usize,
) -> Result<(usize, Vec<f64>), WeightError> {
    if resolution < 8 {
        return Err(WeightError::InvalidParameter(format!(
            "resolution {resolution} is below 8"
        )));
    }
    let res = resolution.next_power_of_two();
    let cells = 2 * res;
    let width = TAU / cells as f64;
    let cfg = QuadConfig {
        base_panels: 8,
        ..QuadConfig::default()
    };
    let one = TrigPoly::constant(1.0);
    let masses = (0..cells)
        .map(|j| {
            let a = -PI + j as f64 * width;
            let domain = IntervalSet::from_arcs([(a, a + width)]);
            weighted_lp_norm(&one, w, 1.0, &domain, &cfg)
                .map(|n| n.log_value)
                .map_err(|e| WeightError::InvalidParameter(e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((res, masses))
}

/// `log W(I)` for the arc of `len` cells starting at cell `start`, wrapping around.
fn arc_mass(masses: &[f64], start: isize, len: usize) -> f64 {
    let n = masses.len() as isize;
    log_sum_exp((0..len as isize).map(|i| masses[(start + i).rem_euclid(n) as usize]))
}

/// Max of `W(2I)/W(I)` over dyadic arcs `I` of length `2 pi / 2^j`, `2^j <= resolution`.
pub fn doubling_ratio<W: Weight + ?Sized>(w: &W, resolution: usize) -> Result<f64, WeightError> {
    let (res, masses) = cell_masses(w, resolution)?;
    let cells = masses.len();
    let mut worst = f64::NEG_INFINITY;
    let mut level = 2;
    while level <= res {
        let len = cells / level;
        for i in 0..level {
            let start = (i * len) as isize;
            let inner = arc_mass(&masses, start, len);
            if inner == f64::NEG_INFINITY {
                return Ok(f64::INFINITY);
            }
            let outer = arc_mass(&masses, start - (len / 2) as isize, 2 * len);
            worst = worst.max(outer - inner);
        }
        level *= 2;
    }
    Ok(worst.exp())
}

/// Max of `omega(t) |I| / W(I)` over dyadic arcs `I` and `t` in `I`.
pub fn astar_constant<W: Weight + ?Sized>(w: &W, resolution: usize) -> Result<f64, WeightError> {
    let (res, masses) = cell_masses(w, resolution)?;
    let cells = masses.len();
    let width = TAU / cells as f64;
    let peaks: Vec<f64> = (0..cells)
        .map(|j| {
            let a = -PI + j as f64 * width;
            // the envelope is the exact cell maximum for catalog factors; sample only when it is not finite
            let bound = w.log_weight_bound(a, a + width);
            if bound.is_finite() {
                return bound;
            }
            (0..SAMPLES_PER_CELL)
                .map(|s| w.log_weight(a + width * (s as f64 + 0.5) / SAMPLES_PER_CELL as f64))
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect();
    let mut worst = f64::NEG_INFINITY;
    let mut level = 1;
    while level <= res {
        let len = cells / level;
        for i in 0..level {
            let start = i * len;
            let mass = arc_mass(&masses, start as isize, len);
            let peak = peaks[start..start + len]
                .iter()
                .copied()
                .fold(f64::NEG_INFINITY, f64::max);
            if peak == f64::NEG_INFINITY {
                continue;
            }
            if mass == f64::NEG_INFINITY {
                return Ok(f64::INFINITY);
            }
            worst = worst.max(peak + (len as f64 * width).ln() - mass);
        }
        level *= 2;
    }
    Ok(worst.exp())
}
