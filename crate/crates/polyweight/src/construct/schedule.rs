use rayon::prelude::*;
use serde::Serialize;

use super::{solve_lemma_m, ConstructError, XiFunction};
use crate::quad::{weighted_norm, QuadConfig};
use crate::trigpoly::counterexample_evaluator;
use crate::weights::{CompositeWeight, IntervalSet, OmegaWeight};

/// Rows whose degree parameter exceeds this are kept in the schedule but not evaluated.
pub const DEFAULT_K_CAP: u64 = 100_000_000;
const DECAY_RATIOS: [f64; 2] = [0.5, 0.9];

/// Which defining equation fixes `a_n` in the fixed-degree schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum NegVariant {
    /// `xi(lambda a) = -n lambda a sqrt(1 - lambda^2) / 2`.
    Sup,
    /// `xi((2 lambda - 1) a) = -p n lambda a (1 - lambda^2)`.
    Lp { p: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScheduleRow {
    pub n: u64,
    pub lambda: f64,
    pub a: f64,
    /// `z_n` for the fixed-degree schedule, `c_n` for the growing-degree one.
    pub anchor: f64,
    /// Degree parameter of `Q = T_K(1 + a^2 - sin^2 t)`; `n` itself for the fixed-degree schedule.
    pub k: u64,
    pub feasible: bool,
    /// The quantity that must tend to `+inf` (`-xi(lambda a)` for the sup variant).
    pub growth: f64,
    /// `2 n a + xi(r a)` (times `p` in the first term for `L_p`) for `r = 0.5, 0.9`; must tend to `-inf`.
    pub decay: [f64; 2],
    /// Residual of the defining equation, or the achieved `xi((1 - 1/n) c) / xi(c)`.
    pub check: f64,
    /// For the sup variant: whether `z_n < h_n`, `h_n` the root of `xi(x) = -sqrt(n) x`.
    pub below_h: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Schedule {
    pub weight: String,
    pub rows: Vec<ScheduleRow>,
}

fn checked_xi(w: &OmegaWeight) -> Result<XiFunction, ConstructError> {
    let xi = XiFunction::new(w.clone());
    if !xi.ratio_grows(0.5) {
        return Err(ConstructError::Precondition(format!(
            "log omega(rt)/log omega(t) stays bounded for {}",
            w.describe()
        )));
    }
    Ok(xi)
}

/// Fixed-degree schedule: `lambda_n = sqrt(1 - n^(-1/2))`, `z_n` from the defining equation
/// and `a_n = z_n / lambda_n` (or `z_n / (2 lambda_n - 1)` for `L_p`).
pub fn neg_schedule(
    w: &OmegaWeight,
    n_list: &[u64],
    variant: NegVariant,
) -> Result<Schedule, ConstructError> {
    let xi = checked_xi(w)?;
    let rows = n_list
        .iter()
        .map(|&n| {
            let nf = n as f64;
            let lambda = (1.0 - nf.powf(-0.5)).sqrt();
            let root = (1.0 - lambda * lambda).sqrt();
            match variant {
                NegVariant::Sup => {
                    let m = 0.5 * nf * root;
                    let z = solve_lemma_m(&xi, m)?;
                    let a = z / lambda;
                    let h = solve_lemma_m(&xi, nf.sqrt()).ok();
                    let decay = DECAY_RATIOS.map(|r| 2.0 * nf * a + xi.value(r * a));
                    Ok(ScheduleRow {
                        n,
                        lambda,
                        a,
                        anchor: z,
                        k: n,
                        feasible: true,
                        growth: nf * lambda * a * root + xi.value(lambda * a),
                        decay,
                        check: (xi.value(z) + m * z).abs() / (m * z),
                        below_h: h.map(|h| z < h),
                    })
                }
                NegVariant::Lp { p } => {
                    let shrink = 2.0 * lambda - 1.0;
                    let m = p * nf * lambda * (1.0 - lambda * lambda) / shrink;
                    let y = solve_lemma_m(&xi, m)?;
                    let a = y / shrink;
                    let decay = DECAY_RATIOS.map(|r| 2.0 * p * nf * a + xi.value(r * a));
                    Ok(ScheduleRow {
                        n,
                        lambda,
                        a,
                        anchor: y,
                        k: n,
                        feasible: true,
                        growth: p * nf * lambda * a * root
                            + (1.0 - lambda).ln()
                            + a.ln()
                            + xi.value(y),
                        decay,
                        check: (xi.value(y) + m * y).abs() / (m * y),
                        below_h: None,
                    })
                }
            }
        })
        .collect::<Result<Vec<_>, ConstructError>>()?;
    Ok(Schedule {
        weight: w.describe(),
        rows,
    })
}

/// Growing-degree schedule: `lambda_n = 1 - 1/n`, `c_n` the largest `c <= min(c_{n-1}, eps/2)`
/// with `xi(lambda_n c) / xi(c) >= 2 n^2`, `a_n = c_n / lambda_n`,
/// `K_n = 2 floor(-xi(c_n) / (lambda_n a_n sqrt(1 - lambda_n^2)))`.
pub fn neg11_schedule(
    w: &OmegaWeight,
    n_list: &[u64],
    k_cap: u64,
) -> Result<Schedule, ConstructError> {
    let xi = checked_xi(w)?;
    let mut previous = 0.5 * xi.eps;
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        if n < 2 {
            return Err(ConstructError::Precondition(
                "the growing-degree schedule starts at n = 2".into(),
            ));
        }
        let nf = n as f64;
        let lambda = 1.0 - 1.0 / nf;
        let target = (2.0 * nf * nf).ln();
        // log of xi(lambda c) / xi(c); decreasing in c on the monotone branch
        let margin = |c: f64| xi.log_neg(lambda * c) - xi.log_neg(c);
        let c = if margin(previous) >= target {
            previous
        } else {
            let (mut lo, mut hi) = (previous, previous);
            while margin(lo) < target {
                lo *= 0.5;
            }
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if margin(mid) >= target {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo <= 1e-15 * hi {
                    break;
                }
            }
            lo
        };
        previous = c;
        let a = c / lambda;
        let root = (1.0 - lambda * lambda).sqrt();
        let log_k = xi.log_neg(c) - (lambda * a * root).ln();
        let k = if log_k > (u64::MAX as f64 / 4.0).ln() {
            u64::MAX
        } else {
            2 * log_k.exp().floor() as u64
        };
        let kf = k as f64;
        rows.push(ScheduleRow {
            n,
            lambda,
            a,
            anchor: c,
            k,
            feasible: k <= k_cap && k >= 1,
            growth: kf * lambda * a * root + xi.value(lambda * a),
            decay: DECAY_RATIOS.map(|r| 2.0 * kf * a + xi.value(r * a)),
            check: margin(c).exp(),
            below_h: None,
        });
    }
    Ok(Schedule {
        weight: w.describe(),
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DivergenceRow {
    pub n: u64,
    pub k: u64,
    /// `||Q'||_{p, omega} / (K ||Q||_{p, omega})`.
    pub ratio: f64,
    /// `|sin 2b| / (4 sqrt((1 + a^2 - sin^2 b)^2 - 1))` at the maximizer `b` of `|Q omega|`
    /// (sup norm only).
    pub lower_bound: Option<f64>,
    pub b_over_a: Option<f64>,
    /// `ratio >= lower_bound - 1e-9` (true when there is no lower bound).
    pub pass: bool,
}

/// Bernstein ratio of the counterexample polynomial for one schedule row.
pub fn divergence_row(
    w: &CompositeWeight,
    row: &ScheduleRow,
    p: f64,
) -> Result<DivergenceRow, ConstructError> {
    if !row.feasible {
        return Err(ConstructError::InfeasibleDegree {
            k: row.k,
            cap: DEFAULT_K_CAP,
        });
    }
    let q = counterexample_evaluator(row.k, row.a);
    let cfg = QuadConfig::default().with_tolerance(1e-12);
    let full = IntervalSet::full();
    let norm = weighted_norm(&q, w, p, &full, &cfg)?;
    let derivative = weighted_norm(&q.derivative(), w, p, &full, &cfg)?;
    let ratio = (derivative.log_value - (row.k as f64).ln() - norm.log_value).exp();
    let (lower_bound, b_over_a) = match norm.argmax.filter(|_| p == f64::INFINITY) {
        Some(b) => {
            let y = 1.0 + q.offset(b);
            let lb = (2.0 * b).sin().abs() / (4.0 * (y * y - 1.0).sqrt());
            // fold into (0, pi/2]: Q and omega only see sin^2
            let folded = b.sin().abs().asin();
            (Some(lb), Some(folded / row.a))
        }
        None => (None, None),
    };
    let pass = lower_bound.is_none_or(|lb| ratio >= lb - 1e-9);
    Ok(DivergenceRow {
        n: row.n,
        k: row.k,
        ratio,
        lower_bound,
        b_over_a,
        pass,
    })
}

/// [`divergence_row`] for every schedule row, in order; infeasible rows carry their error.
pub fn divergence_report(
    w: &CompositeWeight,
    s: &Schedule,
    p: f64,
) -> Vec<Result<DivergenceRow, ConstructError>> {
    s.rows
        .par_iter()
        .map(|row| divergence_row(w, row, p))
        .collect()
}
