//! Multistart derivative-free maximization of a log norm ratio over coefficient vectors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::basis::BasisMatrix;
use crate::quad::{FixedRule, ScanGrid};

/// Sharpness of the log-sum-exp stand-in for the sup norm during the search.
pub(crate) const SMOOTH_MAX_SHARPNESS: f64 = 1e3;
const GOLDEN_STEPS: usize = 24;
const GOLDEN_SWEEPS: usize = 2;
const SIMPLEX_STEP: f64 = 0.2;
const REEVALUATED: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchOptions {
    /// Random starts in addition to the structured seeds.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            restarts: 16,
            seed: 0,
        }
    }
}

pub(crate) enum Sampler {
    Lp { rule: FixedRule, p: f64 },
    Sup { grid: ScanGrid },
}

impl Sampler {
    pub fn nodes(&self) -> &[f64] {
        match self {
            Sampler::Lp { rule, .. } => rule.nodes(),
            Sampler::Sup { grid } => grid.nodes(),
        }
    }
}

/// A discretized weighted norm of `sum c_j phi_j`.
pub(crate) struct Probe {
    sampler: Sampler,
    basis: BasisMatrix,
}

impl Probe {
    pub fn new(sampler: Sampler, cols: usize, row: impl Fn(f64, &mut [f64])) -> Self {
        let basis = BasisMatrix::build(sampler.nodes(), cols, row);
        Probe { sampler, basis }
    }

    fn log_norm(&self, coeffs: &[f64], buf: &mut Vec<f64>) -> f64 {
        self.basis.apply(coeffs, buf);
        match &self.sampler {
            Sampler::Lp { rule, p } => rule.log_lp(buf, *p),
            Sampler::Sup { grid } => grid.log_smooth_max(buf, SMOOTH_MAX_SHARPNESS),
        }
    }
}

/// `log ||numerator|| - log ||denominator||`, invariant under scaling the coefficients.
pub(crate) struct Objective {
    pub numerator: Probe,
    pub denominator: Probe,
}

impl Objective {
    pub fn value(&self, coeffs: &[f64]) -> f64 {
        let mut buf =
            Vec::with_capacity(self.numerator.basis.rows.max(self.denominator.basis.rows));
        let den = self.denominator.log_norm(coeffs, &mut buf);
        let num = self.numerator.log_norm(coeffs, &mut buf);
        let v = num - den;
        if v.is_nan() || den == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            v
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Candidate {
    pub coeffs: Vec<f64>,
    pub value: f64,
}

fn normalized(mut c: Vec<f64>) -> Vec<f64> {
    let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        c.iter_mut().for_each(|x| *x /= norm);
    }
    c
}

fn golden_line(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..GOLDEN_STEPS {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

fn coordinate_sweeps(obj: &Objective, mut c: Vec<f64>) -> (Vec<f64>, f64) {
    let mut best = obj.value(&c);
    for _ in 0..GOLDEN_SWEEPS {
        for i in 0..c.len() {
            let base = c[i];
            let (s, v) = golden_line(
                |s| {
                    let mut trial = c.clone();
                    trial[i] = base + s;
                    obj.value(&trial)
                },
                -1.5,
                1.5,
            );
            if v > best {
                best = v;
                c[i] = base + s;
                c = normalized(c);
            }
        }
    }
    (c, best)
}

/// Nelder-Mead ascent with the standard reflection, expansion and contraction coefficients.
fn nelder_mead(obj: &Objective, start: Vec<f64>, max_evals: usize) -> (Vec<f64>, f64) {
    let dims = start.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dims + 1);
    simplex.push((start.clone(), obj.value(&start)));
    for i in 0..dims {
        let mut v = start.clone();
        v[i] += SIMPLEX_STEP;
        let f = obj.value(&v);
        simplex.push((v, f));
    }
    let mut evals = dims + 1;
    let at = |c: &[f64], d: &[f64], t: f64| -> Vec<f64> {
        c.iter().zip(d).map(|(a, b)| a + t * (b - a)).collect()
    };
    while evals < max_evals {
        simplex.sort_by(|a, b| b.1.total_cmp(&a.1));
        let (best, worst) = (simplex[0].1, simplex[dims].1);
        if (best - worst).abs() <= 1e-13 * (1.0 + best.abs()) {
            break;
        }
        let mut centroid = vec![0.0; dims];
        for (v, _) in &simplex[..dims] {
            centroid
                .iter_mut()
                .zip(v)
                .for_each(|(c, x)| *c += x / dims as f64);
        }
        let worst_v = simplex[dims].0.clone();
        let reflected = at(&centroid, &worst_v, -1.0);
        let fr = obj.value(&reflected);
        evals += 1;
        if fr > best {
            let expanded = at(&centroid, &worst_v, -2.0);
            let fe = obj.value(&expanded);
            evals += 1;
            simplex[dims] = if fe > fr {
                (expanded, fe)
            } else {
                (reflected, fr)
            };
        } else if fr > simplex[dims - 1].1 {
            simplex[dims] = (reflected, fr);
        } else {
            let contracted = if fr > worst {
                at(&centroid, &reflected, 0.5)
            } else {
                at(&centroid, &worst_v, 0.5)
            };
            let fc = obj.value(&contracted);
            evals += 1;
            if fc > worst.max(fr) {
                simplex[dims] = (contracted, fc);
            } else {
                let top = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    let v = at(&top, &entry.0, 0.5);
                    let f = obj.value(&v);
                    *entry = (v, f);
                }
                evals += dims;
            }
        }
    }
    simplex.sort_by(|a, b| b.1.total_cmp(&a.1));
    let (v, f) = simplex.swap_remove(0);
    (normalized(v), f)
}

fn local_search(obj: &Objective, start: Vec<f64>) -> Candidate {
    let dims = start.len();
    let (c, _) = coordinate_sweeps(obj, normalized(start));
    let (coeffs, value) = nelder_mead(obj, c, 300 * dims);
    Candidate { coeffs, value }
}

/// Local searches from every seed plus `restarts` uniform random starts, best first. Ties keep
/// start order, so the result does not depend on thread scheduling.
pub(crate) fn multistart(
    obj: &Objective,
    dims: usize,
    seeds: Vec<Vec<f64>>,
    opts: &SearchOptions,
) -> Vec<Candidate> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut starts = seeds;
    starts.extend((0..opts.restarts).map(|_| {
        (0..dims)
            .map(|_| rng.gen_range(-1.0..1.0))
            .collect::<Vec<f64>>()
    }));
    let mut found: Vec<Candidate> = starts
        .into_par_iter()
        .map(|s| local_search(obj, s))
        .collect();
    found.sort_by(|a, b| b.value.total_cmp(&a.value));
    found
}

/// Re-scores the leading distinct candidates with `exact` and returns the best as
/// `(coefficients, exact value, search value)`.
pub(crate) fn confirm(
    found: &[Candidate],
    exact: impl Fn(&[f64]) -> f64 + Sync,
) -> (Vec<f64>, f64, f64) {
    let mut picked: Vec<&Candidate> = Vec::new();
    for c in found {
        if picked.len() == REEVALUATED {
            break;
        }
        if picked.iter().all(|p| (p.value - c.value).abs() > 1e-9) {
            picked.push(c);
        }
    }
    let scored: Vec<(usize, f64)> = picked
        .par_iter()
        .enumerate()
        .map(|(i, c)| (i, exact(&c.coeffs)))
        .collect();
    let (i, value) =
        scored.into_iter().fold(
            (0, f64::NEG_INFINITY),
            |acc, x| if x.1 > acc.1 { x } else { acc },
        );
    (picked[i].coeffs.clone(), value, picked[i].value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::basis::{trig_derivative_row, trig_row};
    use crate::quad::QuadConfig;
    use crate::weights::{CompositeWeight, IntervalSet};

    #[test]
    fn finds_unit_weight_l2_constant_from_random_starts() {
        let n = 3;
        let w = CompositeWeight::unit();
        let rule =
            || FixedRule::new(&w, &IntervalSet::full(), n as u64, &QuadConfig::default()).unwrap();
        let obj = Objective {
            numerator: Probe::new(
                Sampler::Lp {
                    rule: rule(),
                    p: 2.0,
                },
                2 * n + 1,
                |t, r| trig_derivative_row(n, t, r),
            ),
            denominator: Probe::new(
                Sampler::Lp {
                    rule: rule(),
                    p: 2.0,
                },
                2 * n + 1,
                |t, r| trig_row(n, t, r),
            ),
        };
        let found = multistart(
            &obj,
            2 * n + 1,
            Vec::new(),
            &SearchOptions {
                restarts: 4,
                seed: 7,
            },
        );
        assert!(
            (found[0].value - (n as f64).ln()).abs() < 1e-6,
            "{}",
            found[0].value
        );
        let again = multistart(
            &obj,
            2 * n + 1,
            Vec::new(),
            &SearchOptions {
                restarts: 4,
                seed: 7,
            },
        );
        assert_eq!(found[0].coeffs, again[0].coeffs);
    }

    #[test]
    fn golden_line_finds_parabola_peak() {
        let (x, _) = golden_line(|s| -(s - 0.3) * (s - 0.3), -1.5, 1.5);
        assert!((x - 0.3).abs() < 1e-4);
    }
}
