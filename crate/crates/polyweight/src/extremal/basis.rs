//! Basis functions sampled at quadrature nodes.

/// Dense `nodes x dims` matrix of basis values, row-major.
#[derive(Debug, Clone)]
pub(crate) struct BasisMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl BasisMatrix {
    pub fn build(nodes: &[f64], cols: usize, row: impl Fn(f64, &mut [f64])) -> Self {
        let mut data = vec![0.0; nodes.len() * cols];
        for (chunk, &t) in data.chunks_mut(cols).zip(nodes) {
            row(t, chunk);
        }
        BasisMatrix {
            rows: nodes.len(),
            cols,
            data,
        }
    }

    pub fn apply(&self, coeffs: &[f64], out: &mut Vec<f64>) {
        out.clear();
        out.extend(
            self.data
                .chunks(self.cols)
                .map(|r| r.iter().zip(coeffs).map(|(a, c)| a * c).sum::<f64>()),
        );
    }
}

/// `1, cos t, ..., cos nt, sin t, ..., sin nt`.
pub(crate) fn trig_row(n: usize, t: f64, out: &mut [f64]) {
    let (s1, c1) = t.sin_cos();
    let (mut c, mut s) = (1.0, 0.0);
    out[0] = 1.0;
    for k in 1..=n {
        let next = c * c1 - s * s1;
        s = s * c1 + c * s1;
        c = next;
        out[k] = c;
        out[n + k] = s;
    }
}

/// Derivatives of [`trig_row`]: `0, -k sin kt, k cos kt`.
pub(crate) fn trig_derivative_row(n: usize, t: f64, out: &mut [f64]) {
    trig_row(n, t, out);
    out[0] = 0.0;
    for k in 1..=n {
        let (c, s) = (out[k], out[n + k]);
        out[k] = -(k as f64) * s;
        out[n + k] = k as f64 * c;
    }
}

/// `T_k(cos t) = cos kt` for `k = 0..=n`.
pub(crate) fn chebyshev_row(n: usize, t: f64, out: &mut [f64]) {
    let x = t.cos();
    out[0] = 1.0;
    if n >= 1 {
        out[1] = x;
    }
    for k in 2..=n {
        out[k] = 2.0 * x * out[k - 1] - out[k - 2];
    }
}

/// `T_k'(cos t) = k U_{k-1}(cos t)`, finite at the endpoints.
pub(crate) fn chebyshev_derivative_row(n: usize, t: f64, out: &mut [f64]) {
    let x = t.cos();
    out[0] = 0.0;
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 1..=n {
        out[k] = k as f64 * cur;
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
}

/// `sin t T_k'(cos t) = k sin kt`.
pub(crate) fn damped_derivative_row(n: usize, t: f64, out: &mut [f64]) {
    out[0] = 0.0;
    for k in 1..=n {
        out[k] = k as f64 * (k as f64 * t).sin();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trigpoly::TrigPoly;

    #[test]
    fn rows_match_polynomial_evaluation() {
        let n = 5;
        let v: Vec<f64> = (0..2 * n + 1).map(|i| (i as f64 * 0.37).sin()).collect();
        let p = TrigPoly::from_vector(n, &v);
        let mut row = vec![0.0; 2 * n + 1];
        for t in [-2.0, 0.3, 1.9] {
            trig_row(n, t, &mut row);
            let direct: f64 = row.iter().zip(&v).map(|(a, b)| a * b).sum();
            assert!((direct - p.eval(t)).abs() < 1e-13);
            trig_derivative_row(n, t, &mut row);
            let direct: f64 = row.iter().zip(&v).map(|(a, b)| a * b).sum();
            assert!((direct - p.derivative().eval(t)).abs() < 1e-12);
        }
    }

    #[test]
    fn chebyshev_derivative_at_endpoints() {
        let n = 6;
        let mut row = vec![0.0; n + 1];
        chebyshev_derivative_row(n, 0.0, &mut row);
        for k in 0..=n {
            assert_eq!(row[k], (k * k) as f64);
        }
        chebyshev_derivative_row(n, std::f64::consts::PI, &mut row);
        assert_eq!(row[3], 9.0);
        assert!((row[4] + 16.0).abs() < 1e-12);
        let t = 0.8;
        let mut d = vec![0.0; n + 1];
        chebyshev_derivative_row(n, t, &mut row);
        damped_derivative_row(n, t, &mut d);
        for k in 0..=n {
            assert!((row[k] * t.sin() - d[k]).abs() < 1e-12);
        }
    }
}
