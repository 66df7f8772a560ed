use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::basis::{trig_derivative_row, trig_row, BasisMatrix};
use super::{ExtremalError, ExtremalReport, Extremizer, Method};
use crate::quad::{FixedRule, QuadConfig};
use crate::trigpoly::TrigPoly;
use crate::weights::{IntervalSet, Weight};

const MAX_CONDITION: f64 = 1e12;
const GRAM_TOLERANCE: f64 = 1e-10;

/// `sqrt(diag(w)) * Phi` for the value or derivative basis at the rule nodes.
fn weighted_samples(rule: &FixedRule, n: usize, row: fn(usize, f64, &mut [f64])) -> DMatrix<f64> {
    let dims = 2 * n + 1;
    let basis = BasisMatrix::build(rule.nodes(), dims, |t, r| row(n, t, r));
    let mut m = DMatrix::from_row_slice(basis.rows, basis.cols, &basis.data);
    for (i, w) in rule.scaled_weights().iter().enumerate() {
        m.row_mut(i).scale_mut(w.sqrt());
    }
    m
}

struct Eigenpair {
    value: f64,
    vector: DVector<f64>,
    dropped: usize,
}

/// Largest eigenpair of `A v = lambda B v` through a Cholesky factor of `B`.
fn cholesky_path(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Option<Eigenpair> {
    let l = b.clone().cholesky()?.l();
    let y = l.solve_lower_triangular(a)?;
    let c = l.solve_lower_triangular(&y.transpose())?;
    let c = (&c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::new(c);
    let (i, &value) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.total_cmp(y.1))?;
    let vector = l
        .transpose()
        .solve_upper_triangular(&eig.eigenvectors.column(i).into_owned())?;
    Some(Eigenpair {
        value,
        vector,
        dropped: 0,
    })
}

/// Truncated SVD of the sampled basis: the retained combinations are orthonormal for `B`;
/// directions below the numerical rank tolerance are dropped.
fn orthonormal_path(samples: &DMatrix<f64>, derivative: &DMatrix<f64>) -> Eigenpair {
    let dims = samples.ncols();
    let svd = samples.clone().svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors were requested");
    let floor = svd.singular_values.max() * f64::EPSILON * dims as f64;
    let coef: Vec<DVector<f64>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|&(_, &sigma)| sigma > floor)
        .map(|(i, &sigma)| v_t.row(i).transpose() / sigma)
        .collect();
    let dropped = dims - coef.len();
    let z = DMatrix::from_columns(&coef);
    let dz = derivative * &z;
    let reduced = dz.transpose() * &dz;
    let eig = SymmetricEigen::new(reduced);
    let (i, &value) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.total_cmp(y.1))
        .expect("at least the constant survives");
    Eigenpair {
        value,
        vector: &z * eig.eigenvectors.column(i),
        dropped,
    }
}

/// The weighted L2 Bernstein constant `max ||T'|| / ||T||` over degree `n`, as the square root
/// of the top generalized eigenvalue of the derivative and value Gram matrices.
pub fn bernstein_l2<W: Weight + ?Sized>(w: &W, n: usize) -> Result<ExtremalReport, ExtremalError> {
    if n == 0 {
        return Ok(ExtremalReport {
            constant_log: f64::NEG_INFINITY,
            normalized: 0.0,
            extremizer: Extremizer::Trig(TrigPoly::constant(1.0)),
            method: Method::Eigen,
            restarts: 0,
            residual: 0.0,
            flagged: false,
        });
    }
    let cfg = QuadConfig::default().with_tolerance(GRAM_TOLERANCE);
    let rule = FixedRule::new(w, &IntervalSet::full(), n as u64, &cfg)?;
    let samples = weighted_samples(&rule, n, trig_row);
    let derivative = weighted_samples(&rule, n, trig_derivative_row);
    let b = samples.transpose() * &samples;
    let a = derivative.transpose() * &derivative;

    let spectrum = SymmetricEigen::new(b.clone()).eigenvalues;
    let top = spectrum.max();
    let bottom = spectrum.min();
    let condition = if bottom > 0.0 {
        top / bottom
    } else {
        f64::INFINITY
    };
    let pair = if condition <= MAX_CONDITION {
        cholesky_path(&a, &b).unwrap_or_else(|| orthonormal_path(&samples, &derivative))
    } else {
        orthonormal_path(&samples, &derivative)
    };

    let mut v = pair.vector;
    v /= v.norm();
    let bv = &b * &v;
    let residual = (&a * &v - &bv * pair.value).norm() / (pair.value * bv.norm());
    let value = pair.value.max(0.0);
    Ok(ExtremalReport {
        constant_log: 0.5 * value.ln(),
        normalized: value.sqrt() / n as f64,
        extremizer: Extremizer::Trig(TrigPoly::from_vector(n, v.as_slice())),
        method: Method::Eigen,
        restarts: 0,
        residual,
        flagged: pair.dropped > 0,
    })
}
