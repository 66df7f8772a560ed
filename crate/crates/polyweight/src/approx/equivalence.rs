use rayon::prelude::*;
use serde::Serialize;

use super::{sampled_partial_sum, ApproxError};
use crate::quad::{weighted_norm, QuadConfig};
use crate::trigpoly::{PointEvaluator, TrigPoly};
use crate::weights::{CompositeWeight, IntervalSet, Weight};

/// `|v(t)|^power u(t)` for a trigonometric polynomial `v`.
struct PolynomialWeight<'a> {
    v: TrigPoly,
    power: f64,
    u: &'a CompositeWeight,
    singular: Vec<f64>,
    log_sup: f64,
}

impl Weight for PolynomialWeight<'_> {
    fn log_weight(&self, t: f64) -> f64 {
        self.power * self.v.eval(t).abs().ln() + self.u.log_weight(t)
    }
    fn log_weight_bound(&self, t0: f64, t1: f64) -> f64 {
        self.power * self.log_sup + self.u.log_weight_bound(t0, t1)
    }
    fn singular_points(&self) -> Vec<f64> {
        self.singular.clone()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceReport {
    /// Least `K` for which all test polynomials pass.
    pub k: u64,
    /// `(K, max |log N_omega - log N_K|)` for every `K` tried.
    pub ladder: Vec<(u64, f64)>,
}

/// Least `K` in `1, 2, 4, ..., k_max` such that replacing `omega u` by `|v_{Kn}|^p u` changes
/// every test polynomial's `L_p` norm by at most a factor 2, where `v = omega^(1/p)` (`v = omega`
/// for `p = inf`) and `v_{Kn}` is its partial Fourier sum of degree `K n`.
pub fn norm_equivalence_k<P: PointEvaluator>(
    w: &CompositeWeight,
    u: &CompositeWeight,
    p: f64,
    n: usize,
    k_max: u64,
    test_polys: &[P],
) -> Result<EquivalenceReport, ApproxError> {
    if let Some(bad) = test_polys.iter().find(|t| t.degree() > n as u64) {
        return Err(ApproxError::InvalidParameter(format!(
            "test polynomial of degree {} above {n}",
            bad.degree()
        )));
    }
    if !(p > 0.0) || k_max == 0 {
        return Err(ApproxError::InvalidParameter(format!(
            "need p > 0 and k_max >= 1, got {p}, {k_max}"
        )));
    }
    let cfg = QuadConfig::default();
    let full = IntervalSet::full();
    let weighted = w.times(u)?;
    let reference: Vec<f64> = test_polys
        .par_iter()
        .map(|t| weighted_norm(t, &weighted, p, &full, &cfg).map(|r| r.log_value))
        .collect::<Result<_, _>>()?;

    let root = if p == f64::INFINITY { 1.0 } else { 1.0 / p };
    let power = if p == f64::INFINITY { 1.0 } else { p };
    let mut singular = w.singular_points();
    singular.extend(u.singular_points());
    let mut ladder = Vec::new();
    let mut k = 1;
    while k <= k_max {
        let v = sampled_partial_sum(&|t| (root * w.log_weight(t)).exp(), k as usize * n)?;
        let replaced = PolynomialWeight {
            log_sup: v.abs_coefficient_sum().ln(),
            v,
            power,
            u,
            singular: singular.clone(),
        };
        let deviations: Vec<f64> = test_polys
            .par_iter()
            .zip(&reference)
            .map(|(t, r)| {
                weighted_norm(t, &replaced, p, &full, &cfg).map(|x| (x.log_value - r).abs())
            })
            .collect::<Result<_, _>>()?;
        let worst = deviations.into_iter().fold(0.0, f64::max);
        ladder.push((k, worst));
        k *= 2;
    }
    match ladder
        .iter()
        .find(|(_, worst)| *worst <= std::f64::consts::LN_2)
    {
        Some(&(k, _)) => Ok(EquivalenceReport { k, ladder }),
        None => Err(ApproxError::NotFound {
            k_max,
            worst: ladder.last().map_or(f64::INFINITY, |x| x.1),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{FSpec, GSpec};

    #[test]
    fn constant_weight_passes_at_one() {
        let polys: Vec<TrigPoly> = (0..=4).map(TrigPoly::cos_k).collect();
        let r = norm_equivalence_k(
            &CompositeWeight::unit(),
            &CompositeWeight::unit(),
            1.0,
            4,
            4,
            &polys,
        )
        .unwrap();
        assert_eq!(r.k, 1);
        assert!(r.ladder[0].1 < 1e-9);
    }

    #[test]
    fn abs_sin_weight_is_monotone() {
        let w = CompositeWeight::single(FSpec::power(1.0), GSpec::sin());
        let polys: Vec<TrigPoly> = (0..=8).map(TrigPoly::cos_k).collect();
        let r = norm_equivalence_k(&w, &CompositeWeight::unit(), 2.0, 8, 8, &polys).unwrap();
        let pass: Vec<bool> = r
            .ladder
            .iter()
            .map(|x| x.1 <= std::f64::consts::LN_2)
            .collect();
        assert!(pass.windows(2).all(|w| !w[0] || w[1]), "{:?}", r.ladder);
    }

    #[test]
    fn root_weight_scale_matches() {
        // v = omega^(1/p) has F/p, whose x1 at n equals omega's x1 at p n
        let f = FSpec::power(1.0);
        for n in [16.0, 256.0, 4096.0] {
            let ratio = crate::weights::solve_x1(&f, n).unwrap()
                / crate::weights::solve_x1(&f, 2.0 * n).unwrap();
            assert!(ratio > 1.0 && ratio < 2.0);
        }
    }

    #[test]
    fn rejects_high_degree_tests() {
        let polys = vec![TrigPoly::cos_k(5)];
        assert!(norm_equivalence_k(
            &CompositeWeight::unit(),
            &CompositeWeight::unit(),
            1.0,
            4,
            4,
            &polys
        )
        .is_err());
    }
}
